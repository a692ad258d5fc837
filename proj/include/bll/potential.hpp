#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "bll/grid.hpp"

namespace bll {

struct PotentialDescriptor {
  enum class Kind { zero, sine_bump, gaussian, singular };

  Kind kind = Kind::zero;
  double amplitude = 0.0;
  Point center = Point::Constant(0.5);
  double width = 0.1;
  double alpha = 1.0;

  static PotentialDescriptor zero() { return {}; }
  static PotentialDescriptor sine_bump(double c);
  static PotentialDescriptor gaussian(double amplitude, const Point& center, double width);
  static PotentialDescriptor singular(double alpha, const Point& center, double amplitude = 1.0);

  // Value at x for a grid of width h (h fixes the singular cap).
  double evaluate(const Point& x, int n_dims, double h) const;
  void validate(int n_dims) const;
};

std::string to_string(PotentialDescriptor::Kind kind);
PotentialDescriptor::Kind potential_kind_from_string(const std::string& s);

struct PotentialField {
  Grid grid;
  PotentialDescriptor descriptor;
  Eigen::VectorXd values;  // one per interior node
  double ln_half_norm = 0.0;
  std::uint64_t hash = 0;
};

PotentialField sample_potential(const PotentialDescriptor& spec, const Grid& grid);
PotentialField potential_from_values(const Grid& grid, const Eigen::VectorXd& values);

// FNV-1a over grid shape and the raw bytes of the values.
std::uint64_t potential_hash(const Grid& grid, const Eigen::VectorXd& values);

}  // namespace bll
