#pragma once

#include <Eigen/Core>

#include "bll/resolvent.hpp"
#include "bll/spectral_data.hpp"

namespace bll {

struct DtNMatrix {
  Grid grid;
  cd lambda;
  std::uint64_t operator_id = 0;
  TraceMode mode = TraceMode::variational;
  Eigen::MatrixXcd matrix;
};

// Interior values of the solution of (A - lambda) u = 0 with boundary data f.
// Solved as u = (A - lambda)^{-1} C f, which equals E f + w for any lifting E.
Eigen::VectorXcd solve_dirichlet(const DiscreteOperator& op, cd lambda, const Eigen::VectorXcd& f);
Eigen::VectorXcd solve_dirichlet(const ShiftedSolver& solver, const Eigen::VectorXcd& f);

// Neumann trace of a Dirichlet solution u (interior values) with data f.
Eigen::VectorXcd dirichlet_trace(const Grid& grid, const Eigen::VectorXcd& u, const Eigen::VectorXcd& f, cd lambda,
                                 TraceMode mode);

Eigen::VectorXcd dn_apply(const DiscreteOperator& op, cd lambda, const Eigen::VectorXcd& f, TraceMode mode);
Eigen::VectorXcd dn_apply(const ShiftedSolver& solver, const Eigen::VectorXcd& f, TraceMode mode);

DtNMatrix dn_matrix(const DiscreteOperator& op, cd lambda, TraceMode mode);

// Trapezoid-weighted bilinear form on full-lattice fields:
// sum over lattice edges w h^{n-2} (u_a - u_b)(v_a - v_b) + sum over nodes mu h^n (q - lambda) u v,
// with q taken as zero on boundary nodes.
cd energy_form(const Grid& grid, const Eigen::VectorXd& q, cd lambda, const Eigen::VectorXcd& u,
               const Eigen::VectorXcd& v);

// Face-DOF graph Laplacian (neighbors on the same face), unscaled.
Eigen::MatrixXd boundary_graph_laplacian(const Grid& grid);

double dn_diff_opnorm(const DtNMatrix& d1, const DtNMatrix& d2, double weight_eps);

Eigen::VectorXcd dn_derivative_series(const SpectralData& sd, cd lambda, const Eigen::VectorXcd& f, int m,
                                      double lambda_ext = -1.0);

Eigen::VectorXcd low_mode_contribution(const SpectralData& sd, cd lambda, const Eigen::VectorXcd& f, Index k0);

struct ParabolicRegion {
  double s = 1.0;
  bool contains(cd lambda, const SpectralData* sd = nullptr) const;
};

bool in_parabolic_region(cd lambda, double s, const SpectralData* sd = nullptr);

}  // namespace bll
