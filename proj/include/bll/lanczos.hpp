#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace bll {

struct LanczosOptions {
  int block = 8;
  int max_restarts = 200;
  double shift = 0.0;  // must lie strictly below the spectrum
  unsigned seed = 1;
  double tol = 1e-10;  // relative residual target for the lowest K pairs
};

struct LanczosResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // Euclidean-orthonormal columns
  int restarts = 0;
  Eigen::Index solves = 0;
};

// Thick-restart block Lanczos on (A - shift)^{-1} for the K smallest
// eigenpairs of a symmetric matrix.
LanczosResult lowest_eigenpairs(const Eigen::SparseMatrix<double>& A, Eigen::Index K,
                                const LanczosOptions& opts);

}  // namespace bll
