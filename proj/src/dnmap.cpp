#include "bll/dnmap.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bll/error.hpp"
#include "bll/norms.hpp"

namespace bll {

namespace {

void check_boundary(const Grid& g, const Eigen::VectorXcd& f) {
  if (f.size() != g.boundary_count())
    throw Error(ErrorCode::GridMismatch, "boundary function length does not match grid");
}

void check_mode(TraceMode mode) {
  if (mode != TraceMode::onesided2 && mode != TraceMode::variational)
    throw Error(ErrorCode::BadMode, "unknown trace mode");
}

double factorial(int m) {
  double r = 1.0;
  for (int i = 2; i <= m; ++i) r *= i;
  return r;
}

bool hits_spectrum(cd lambda, double value) {
  return std::abs(value - lambda) <= 1e-8 * std::max(1.0, std::abs(value));
}

}  // namespace

Eigen::VectorXcd solve_dirichlet(const ShiftedSolver& solver, const Eigen::VectorXcd& f) {
  check_boundary(solver.grid(), f);
  const Eigen::VectorXcd rhs = solver.grid().calculus().coupling.cast<cd>() * f;
  return solver.solve(rhs);
}

Eigen::VectorXcd solve_dirichlet(const DiscreteOperator& op, cd lambda, const Eigen::VectorXcd& f) {
  return solve_dirichlet(ShiftedSolver(op, lambda), f);
}

Eigen::VectorXcd dirichlet_trace(const Grid& g, const Eigen::VectorXcd& u, const Eigen::VectorXcd& f, cd lambda,
                                 TraceMode mode) {
  check_mode(mode);
  check_boundary(g, f);
  const Index nB = g.boundary_count();
  const double h = g.h();
  Eigen::VectorXcd t(nB);
  if (mode == TraceMode::onesided2) {
    for (Index b = 0; b < nB; ++b) {
      const BoundaryDof& d = g.boundary_dof(b);
      t[b] = (3.0 * f[b] - 4.0 * u[d.inner1] + u[d.inner2]) / (2.0 * h);
    }
    return t;
  }
  const BoundaryCalculus& bc = g.calculus();
  t = bc.stiffness.cast<cd>() * f - lambda * (bc.mass.cast<cd>() * f);
  for (Index b = 0; b < nB; ++b) t[b] -= u[g.boundary_dof(b).inner1] / h;
  return t;
}

Eigen::VectorXcd dn_apply(const ShiftedSolver& solver, const Eigen::VectorXcd& f, TraceMode mode) {
  check_mode(mode);
  const Eigen::VectorXcd u = solve_dirichlet(solver, f);
  return dirichlet_trace(solver.grid(), u, f, solver.lambda(), mode);
}

Eigen::VectorXcd dn_apply(const DiscreteOperator& op, cd lambda, const Eigen::VectorXcd& f, TraceMode mode) {
  check_mode(mode);
  return dn_apply(ShiftedSolver(op, lambda), f, mode);
}

DtNMatrix dn_matrix(const DiscreteOperator& op, cd lambda, TraceMode mode) {
  check_mode(mode);
  const Grid& g = op.grid();
  const auto solver = global_factor_cache().get(op, lambda);
  const Index nB = g.boundary_count();
  DtNMatrix D{g, lambda, op.id(), mode, Eigen::MatrixXcd(nB, nB)};
  for (Index j = 0; j < nB; ++j) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(nB);
    e[j] = 1.0;
    D.matrix.col(j) = dn_apply(*solver, e, mode);
  }
  return D;
}

cd energy_form(const Grid& g, const Eigen::VectorXd& q, cd lambda, const Eigen::VectorXcd& u,
               const Eigen::VectorXcd& v) {
  if (u.size() != g.lattice_count() || v.size() != g.lattice_count() || q.size() != g.interior_count())
    throw Error(ErrorCode::ShapeMismatch, "energy_form expects lattice fields and an interior potential");
  const int n = g.dims();
  const int N = g.points_per_axis();
  const double stiff = std::pow(g.h(), n - 2);
  cd edges = 0.0, nodes = 0.0;
  for (Index x = 0; x < g.lattice_count(); ++x) {
    const Coords c = g.coords(x);
    double mu = 1.0;
    for (int d = 0; d < n; ++d) mu *= trapezoid_weight(c[d], N);
    const Index i = g.interior_of(x);
    nodes += mu * ((i >= 0 ? q[i] : 0.0) - lambda) * u[x] * v[x];
    for (int d = 0; d < n; ++d) {
      if (c[d] == N) continue;
      Coords cy = c;
      cy[d] += 1;
      const Index y = g.node(cy);
      double w = 1.0;
      for (int e = 0; e < n; ++e)
        if (e != d) w *= trapezoid_weight(c[e], N);
      edges += w * (u[x] - u[y]) * (v[x] - v[y]);
    }
  }
  return stiff * edges + g.cell_volume() * nodes;
}

Eigen::MatrixXd boundary_graph_laplacian(const Grid& g) {
  const Index nB = g.boundary_count();
  const int N = g.points_per_axis();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(nB, nB);
  for (Index b = 0; b < nB; ++b) {
    const BoundaryDof& d = g.boundary_dof(b);
    const Coords c = g.coords(d.node);
    for (int e = 0; e < g.dims(); ++e) {
      if (e == d.axis) continue;
      Coords cn = c;
      cn[e] += 1;
      if (cn[e] >= N) continue;
      const Index nb = g.boundary_of(g.node(cn));
      L(b, b) += 1.0;
      L(nb, nb) += 1.0;
      L(b, nb) -= 1.0;
      L(nb, b) -= 1.0;
    }
  }
  return L;
}

double dn_diff_opnorm(const DtNMatrix& d1, const DtNMatrix& d2, double weight_eps) {
  if (d1.grid != d2.grid || d1.matrix.rows() != d2.matrix.rows() || d1.matrix.cols() != d2.matrix.cols())
    throw Error(ErrorCode::ShapeMismatch, "DN matrices live on different grids");
  if (d1.lambda != d2.lambda || d1.mode != d2.mode)
    throw Error(ErrorCode::ShapeMismatch, "DN matrices differ in lambda or trace mode");
  if (!(weight_eps >= 0.0)) throw Error(ErrorCode::BadExponent, "weight_eps must be nonnegative");
  Eigen::MatrixXcd diff = d1.matrix - d2.matrix;
  if (weight_eps > 0.0) {
    const double h = d1.grid.h();
    const Eigen::MatrixXd L = boundary_graph_laplacian(d1.grid) / (h * h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd::Identity(L.rows(), L.cols()) + L);
    const Eigen::VectorXd w = es.eigenvalues().array().pow(-weight_eps / 2.0);
    const Eigen::MatrixXd W = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
    diff = W.cast<cd>() * diff;
  }
  if (diff.isZero(0.0)) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(diff);
  return svd.singularValues()[0];
}

Eigen::VectorXcd dn_derivative_series(const SpectralData& sd, cd lambda, const Eigen::VectorXcd& f, int m,
                                      double lambda_ext) {
  if (!sd.has_traces()) throw Error(ErrorCode::BadMode, "spectral data carries no Neumann traces");
  if (m < 1) throw Error(ErrorCode::RangeError, "derivative order must be positive");
  check_boundary(sd.grid, f);
  if (lambda.imag() == 0.0 && lambda.real() <= lambda_ext) lambda_ext = lambda.real() - 1.0;
  if (!(lambda_ext < 0.0)) lambda_ext = -1.0;
  const Eigen::VectorXd lam = sd.unshifted_values();
  for (Index k = 0; k < sd.count(); ++k)
    if (hits_spectrum(lambda, lam[k]))
      throw Error(ErrorCode::SpectrumHit, "lambda within 1e-8 of eigenvalue " + std::to_string(k + 1));

  const Eigen::VectorXcd F = BoundaryLifting(sd.grid, lambda_ext).apply(f);
  const Eigen::VectorXcd qF = (sd.potential.array() + lambda_ext).matrix().cast<cd>().cwiseProduct(F);
  const double w = sd.grid.cell_volume();
  const double mf = factorial(m);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(sd.grid.boundary_count());
  for (Index k = 0; k < sd.count(); ++k) {
    const auto phi = sd.vectors.col(k);
    const cd coeff = w * (phi.cast<cd>().cwiseProduct(qF - lam[k] * F)).sum();
    out += (-mf * coeff / std::pow(lam[k] - lambda, m + 1)) * sd.traces.col(k).cast<cd>();
  }
  if (m == 1 && *sd.trace_mode == TraceMode::variational)
    out -= sd.grid.calculus().mass.cast<cd>() * f;
  return out;
}

Eigen::VectorXcd low_mode_contribution(const SpectralData& sd, cd lambda, const Eigen::VectorXcd& f, Index k0) {
  if (!sd.has_traces()) throw Error(ErrorCode::BadMode, "spectral data carries no Neumann traces");
  if (k0 < 1 || k0 > sd.count())
    throw Error(ErrorCode::RangeError, "k0 = " + std::to_string(k0) + " outside [1, K]");
  check_boundary(sd.grid, f);
  const Eigen::VectorXd lam = sd.unshifted_values();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(sd.grid.boundary_count());
  for (Index k = 0; k + 1 < k0; ++k) {
    if (hits_spectrum(lambda, lam[k])) throw Error(ErrorCode::SpectrumHit, "lambda on a low eigenvalue");
    const Eigen::VectorXcd t = sd.traces.col(k).cast<cd>();
    const cd a = boundary_dot(t, f, sd.grid);
    out += (a / (lam[k] - lambda)) * t;
  }
  return out;
}

bool ParabolicRegion::contains(cd lambda, const SpectralData* sd) const {
  if (!(s > 0.0)) throw Error(ErrorCode::RangeError, "region parameter s must be positive");
  if (!(lambda.real() < s * lambda.imag() * lambda.imag() / 2.0 - 1.0)) return false;
  if (sd) {
    const Eigen::VectorXd lam = sd->unshifted_values();
    for (Index k = 0; k < lam.size(); ++k)
      if (hits_spectrum(lambda, lam[k])) return false;
  }
  return true;
}

bool in_parabolic_region(cd lambda, double s, const SpectralData* sd) { return ParabolicRegion{s}.contains(lambda, sd); }

}  // namespace bll
