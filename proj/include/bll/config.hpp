#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bll/isozaki.hpp"
#include "bll/potential.hpp"

namespace bll {

struct ExperimentConfig {
  std::string experiment;
  int n = 3;
  int N = 16;
  PotentialDescriptor q1 = PotentialDescriptor::sine_bump(5.0);
  PotentialDescriptor q2 = PotentialDescriptor::zero();
  std::optional<Index> K;
  double tol = 1e-10;
  std::vector<double> lambdas;
  std::vector<int> m_values;
  TraceMode trace_mode = TraceMode::variational;
  PlaneWave plane_wave = PlaneWave::lattice;
  PlaneWave remainder_wave = PlaneWave::sampled;
  unsigned seed = 1;
  int trials = 5;
  std::string output_dir = "out";
  std::string cache_dir;
  std::optional<std::pair<Index, Index>> k_range;
  std::optional<Index> k0;
  int k_max = 2;
  std::vector<double> xi;
  std::vector<double> eta;
  int derivative_order = 1;
  double weight_eps = 0.0;
  double p = 2.0;
  std::vector<int> refine;
  std::vector<std::string> parts;
  std::string source;  // canonical JSON text of the parsed config

  bool wants(const std::string& part) const;
};

const std::vector<std::string>& experiment_ids();

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace bll
