#pragma once

#include <memory>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "bll/grid.hpp"
#include "bll/potential.hpp"

namespace bll {

// A = -Delta_h + diag(q) on interior nodes with Dirichlet elimination.
class DiscreteOperator {
 public:
  DiscreteOperator(PotentialField q, Eigen::SparseMatrix<double> matrix);

  const Grid& grid() const { return q_.grid; }
  const PotentialField& potential() const { return q_; }
  const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
  Index dimension() const { return matrix_.rows(); }
  std::uint64_t id() const { return q_.hash; }

  // Lower bound for the spectrum: smallest Laplacian eigenvalue plus min q.
  double spectrum_lower_bound() const;

 private:
  PotentialField q_;
  Eigen::SparseMatrix<double> matrix_;
};

DiscreteOperator assemble_hamiltonian(const Grid& grid, const PotentialField& q);

// Factorized (-Delta_h - lambda_ext) for boundary liftings, lambda_ext < 0.
class BoundaryLifting {
 public:
  explicit BoundaryLifting(const Grid& grid, double lambda_ext = -1.0);

  double lambda_ext() const { return lambda_ext_; }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& f) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& f) const;

 private:
  Grid grid_;
  double lambda_ext_;
  std::shared_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> llt_;
};

Eigen::VectorXcd lift_boundary(const Grid& grid, const DiscreteOperator& q_ref, const Eigen::VectorXcd& f);

}  // namespace bll
