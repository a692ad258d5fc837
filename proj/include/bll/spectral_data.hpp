#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "bll/grid.hpp"

namespace bll {

enum class TraceMode { onesided2, variational };

std::string to_string(TraceMode mode);
TraceMode trace_mode_from_string(const std::string& s);

// Lowest Dirichlet eigenpairs, ascending.  Columns of vectors are
// orthonormal in the h^n-weighted inner product; traces has one column per
// pair once neumann_traces has run.
struct SpectralData {
  explicit SpectralData(Grid g) : grid(std::move(g)) {}

  Grid grid;
  Eigen::VectorXd potential;
  std::uint64_t operator_id = 0;
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd traces;
  double shift = 0.0;
  std::optional<TraceMode> trace_mode;

  Index count() const { return values.size(); }
  bool has_traces() const { return trace_mode.has_value() && traces.cols() == values.size(); }
  Eigen::VectorXd unshifted_values() const { return values.array() - shift; }
};

}  // namespace bll
