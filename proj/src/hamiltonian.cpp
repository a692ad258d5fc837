#include "bll/hamiltonian.hpp"

#include <cmath>
#include <numbers>

#include "bll/error.hpp"

namespace bll {

namespace {

Eigen::SparseMatrix<double> laplacian_with(const Grid& g, const Eigen::VectorXd& diag_extra) {
  const int n = g.dims();
  const int N = g.points_per_axis();
  const double ih2 = 1.0 / (g.h() * g.h());
  std::vector<Eigen::Triplet<double>> tp;
  tp.reserve(static_cast<std::size_t>(g.interior_count()) * (2 * n + 1));
  for (Index i = 0; i < g.interior_count(); ++i) {
    const Coords c = g.coords(g.interior_node(i));
    tp.emplace_back(i, i, 2.0 * n * ih2 + diag_extra[i]);
    for (int d = 0; d < n; ++d) {
      for (int s : {-1, 1}) {
        Coords cn = c;
        cn[d] += s;
        if (cn[d] <= 0 || cn[d] >= N) continue;
        tp.emplace_back(i, g.interior_of(g.node(cn)), -ih2);
      }
    }
  }
  Eigen::SparseMatrix<double> A(g.interior_count(), g.interior_count());
  A.setFromTriplets(tp.begin(), tp.end());
  return A;
}

}  // namespace

DiscreteOperator::DiscreteOperator(PotentialField q, Eigen::SparseMatrix<double> matrix)
    : q_(std::move(q)), matrix_(std::move(matrix)) {}

double DiscreteOperator::spectrum_lower_bound() const {
  const double h = grid().h();
  const double s = std::sin(std::numbers::pi * h / 2.0);
  const double lap = grid().dims() * 4.0 / (h * h) * s * s;
  return lap + (q_.values.size() ? q_.values.minCoeff() : 0.0);
}

DiscreteOperator assemble_hamiltonian(const Grid& grid, const PotentialField& q) {
  require_same_grid(grid, q.grid, "assemble_hamiltonian");
  if (q.values.size() != grid.interior_count())
    throw Error(ErrorCode::GridMismatch, "assemble_hamiltonian: potential length");
  return DiscreteOperator(q, laplacian_with(grid, q.values));
}

BoundaryLifting::BoundaryLifting(const Grid& grid, double lambda_ext)
    : grid_(grid), lambda_ext_(lambda_ext) {
  if (!(lambda_ext < 0.0)) throw Error(ErrorCode::SolveFailure, "lifting parameter must be negative");
  const Eigen::VectorXd shift = Eigen::VectorXd::Constant(grid.interior_count(), -lambda_ext);
  llt_ = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>(laplacian_with(grid, shift));
  if (llt_->info() != Eigen::Success) throw Error(ErrorCode::SolveFailure, "lifting factorization failed");
}

Eigen::VectorXd BoundaryLifting::apply(const Eigen::VectorXd& f) const {
  if (f.size() != grid_.boundary_count())
    throw Error(ErrorCode::GridMismatch, "lift_boundary: boundary function length");
  Eigen::VectorXd rhs = grid_.calculus().coupling * f;
  Eigen::VectorXd u = llt_->solve(rhs);
  if (llt_->info() != Eigen::Success) throw Error(ErrorCode::SolveFailure, "lifting solve failed");
  return u;
}

Eigen::VectorXcd BoundaryLifting::apply(const Eigen::VectorXcd& f) const {
  Eigen::VectorXcd u(grid_.interior_count());
  u.real() = apply(Eigen::VectorXd(f.real()));
  u.imag() = apply(Eigen::VectorXd(f.imag()));
  return u;
}

Eigen::VectorXcd lift_boundary(const Grid& grid, const DiscreteOperator& q_ref, const Eigen::VectorXcd& f) {
  require_same_grid(grid, q_ref.grid(), "lift_boundary");
  return BoundaryLifting(grid).apply(f);
}

}  // namespace bll
