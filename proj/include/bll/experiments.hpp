#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bll/config.hpp"
#include "bll/spectral_data.hpp"

namespace bll {

struct Assertion {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  std::string to_csv() const;
};

struct ReportBundle {
  std::string experiment;
  std::string config;
  std::vector<Table> tables;
  std::vector<Assertion> assertions;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<ReportBundle> children;

  bool all_pass() const;
  const Assertion* find(const std::string& name) const;
  double metric(const std::string& name) const;
  std::string summary_json() const;
  // Writes <table>.csv files and summary.json; children go to subdirectories.
  void write(const std::filesystem::path& dir) const;
};

struct RunContext {
  std::filesystem::path cache_dir;
};

// Cache directory precedence: explicit flag, BLL_CACHE_DIR, config value.
std::filesystem::path resolve_cache_dir(const std::string& flag, const ExperimentConfig& cfg);

ReportBundle run_experiment(const ExperimentConfig& cfg, const RunContext& ctx = {});

std::string format_number(double v);

// Smooth deterministic boundary data used by the DN experiments.
Eigen::VectorXcd smooth_boundary_data(const Grid& grid);

}  // namespace bll
