#include "bll/isozaki.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "bll/error.hpp"
#include "bll/norms.hpp"
#include "bll/parallel.hpp"

namespace bll {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

IsozakiParams make_params(const Eigen::VectorXd& xi, const Eigen::VectorXd& eta, int m) {
  const Index n = xi.size();
  if ((n != 2 && n != 3) || eta.size() != n) throw Error(ErrorCode::ShapeMismatch, "xi and eta must be 2- or 3-vectors");
  if (m < 2) throw Error(ErrorCode::RangeError, "m must be at least 2");
  if (xi.norm() == 0.0) throw Error(ErrorCode::BadQuery, "xi must be nonzero");
  if (std::abs(eta.norm() - 1.0) > 1e-12) throw Error(ErrorCode::NotOrthogonal, "eta must be a unit vector");
  if (std::abs(xi.dot(eta)) > 1e-12) throw Error(ErrorCode::NotOrthogonal, "xi . eta = " + fmt(xi.dot(eta)));
  if (xi.norm() >= 2.0 * m) throw Error(ErrorCode::XiTooLarge, "|xi| must be below 2m");
  IsozakiParams P;
  P.n = static_cast<int>(n);
  P.m = m;
  P.xi = xi;
  P.eta = eta;
  P.c_m = std::sqrt(1.0 - xi.squaredNorm() / (4.0 * m * m));
  P.theta = P.c_m * eta + xi / (2.0 * m);
  P.omega = P.c_m * eta - xi / (2.0 * m);
  P.sqrt_tau = cd(m, 1.0);
  P.tau = P.sqrt_tau * P.sqrt_tau;
  return P;
}

Eigen::VectorXd default_eta(const Eigen::VectorXd& xi) {
  Index a = 0;
  xi.cwiseAbs().minCoeff(&a);
  Eigen::VectorXd e = Eigen::VectorXd::Unit(xi.size(), a);
  const double x2 = xi.squaredNorm();
  if (x2 > 0.0) e -= (e.dot(xi) / x2) * xi;
  return e.normalized();
}

std::string to_string(PlaneWave w) { return w == PlaneWave::sampled ? "sampled" : "lattice"; }

PlaneWave plane_wave_from_string(const std::string& s) {
  if (s == "sampled") return PlaneWave::sampled;
  if (s == "lattice") return PlaneWave::lattice;
  throw Error(ErrorCode::ConfigError, "unknown plane wave kind '" + s + "'");
}

cd branch_sqrt(cd lambda) {
  if (lambda.imag() == 0.0 && lambda.real() > 0.0)
    throw Error(ErrorCode::BranchAmbiguous, "lambda on the positive real axis");
  cd s = std::sqrt(lambda);
  if (s.imag() < 0.0) s = -s;
  return s;
}

Eigen::VectorXcd plane_wave_lattice(const Grid& grid, cd lambda, const Eigen::VectorXcd& d, PlaneWave kind) {
  const int n = grid.dims();
  if (d.size() != n) throw Error(ErrorCode::ShapeMismatch, "direction length does not match dimension");
  const cd st = branch_sqrt(lambda);
  const double h = grid.h();
  Eigen::VectorXcd kappa(n);
  for (int j = 0; j < n; ++j) {
    const cd k = st * d[j];
    kappa[j] = kind == PlaneWave::lattice ? (2.0 / h) * std::asin(k * h / 2.0) : k;
  }
  const int N = grid.points_per_axis();
  // Per-axis factors e^{i kappa_j c h}, multiplied per node.
  std::vector<Eigen::VectorXcd> axis(n, Eigen::VectorXcd(N + 1));
  for (int j = 0; j < n; ++j)
    for (int c = 0; c <= N; ++c) axis[j][c] = std::exp(cd(0.0, 1.0) * kappa[j] * (c * h));
  Eigen::VectorXcd out(grid.lattice_count());
  for (Index x = 0; x < out.size(); ++x) {
    const Coords c = grid.coords(x);
    cd v = 1.0;
    for (int j = 0; j < n; ++j) v *= axis[j][c[j]];
    out[x] = v;
  }
  return out;
}

namespace {

Eigen::VectorXcd at_boundary(const Grid& g, const Eigen::VectorXcd& full) {
  Eigen::VectorXcd f(g.boundary_count());
  for (Index b = 0; b < f.size(); ++b) f[b] = full[g.boundary_dof(b).node];
  return f;
}

Eigen::VectorXcd at_interior(const Grid& g, const Eigen::VectorXcd& full) {
  Eigen::VectorXcd u(g.interior_count());
  for (Index i = 0; i < u.size(); ++i) u[i] = full[g.interior_node(i)];
  return u;
}

void check_tau(const ShiftedSolver& solver, const IsozakiParams& P) {
  if (solver.lambda() != P.tau) throw Error(ErrorCode::BadQuery, "factorization was built for another tau");
  if (solver.grid().dims() != P.n) throw Error(ErrorCode::ShapeMismatch, "parameter dimension differs from grid");
}

}  // namespace

Eigen::VectorXcd cgo_boundary(cd lambda, const Eigen::VectorXcd& d, const Grid& grid, PlaneWave kind) {
  return at_boundary(grid, plane_wave_lattice(grid, lambda, d, kind));
}

cd s_functional(const ShiftedSolver& solver, const IsozakiParams& P, TraceMode mode, PlaneWave kind) {
  check_tau(solver, P);
  const Grid& g = solver.grid();
  const Eigen::VectorXcd f = cgo_boundary(P.tau, P.omega.cast<cd>(), g, kind);
  const Eigen::VectorXcd v = cgo_boundary(P.tau, (-P.theta).cast<cd>(), g, kind);
  return boundary_dot(dn_apply(solver, f, mode), v, g);
}

cd s_functional(const DiscreteOperator& op, const IsozakiParams& P, TraceMode mode, PlaneWave kind) {
  return s_functional(ShiftedSolver(op, P.tau), P, mode, kind);
}

cd born_remainder(const ShiftedSolver& solver, const Eigen::VectorXd& q, const IsozakiParams& P, PlaneWave kind) {
  check_tau(solver, P);
  const Grid& g = solver.grid();
  const Eigen::VectorXcd qc = q.cast<cd>();
  const Eigen::VectorXcd U = at_interior(g, plane_wave_lattice(g, P.tau, P.omega.cast<cd>(), kind));
  const Eigen::VectorXcd V = at_interior(g, plane_wave_lattice(g, P.tau, (-P.theta).cast<cd>(), kind));
  const Eigen::VectorXcd w = solver.solve(Eigen::VectorXcd(qc.cwiseProduct(U)));
  return -volume_dot(w, qc.cwiseProduct(V), g);
}

cd interior_fourier(const Grid& g, const Eigen::VectorXd& v, const Eigen::VectorXcd& k) {
  if (v.size() != g.interior_count()) throw Error(ErrorCode::ShapeMismatch, "field length");
  cd sum = 0.0;
  for (Index i = 0; i < v.size(); ++i) {
    const Point x = g.interior_position(i);
    cd phase = 0.0;
    for (int j = 0; j < g.dims(); ++j) phase += k[j] * x[j];
    sum += std::exp(cd(0.0, -1.0) * phase) * v[i];
  }
  return g.cell_volume() * sum;
}

BornTerms born_decomposition(const DiscreteOperator& op, const IsozakiParams& P, TraceMode mode, PlaneWave kind) {
  const Grid& g = op.grid();
  const ShiftedSolver solver(op, P.tau);
  BornTerms t;
  t.lhs = s_functional(solver, P, mode, kind);
  const Eigen::VectorXcd k = P.sqrt_tau * (P.theta - P.omega).cast<cd>();
  t.fourier = interior_fourier(g, op.potential().values, k);

  const int N = g.points_per_axis();
  cd mass_sum = 0.0;
  for (Index x = 0; x < g.lattice_count(); ++x) {
    const Coords c = g.coords(x);
    const Point p = g.position(x);
    double mu = 1.0;
    cd phase = 0.0;
    for (int j = 0; j < g.dims(); ++j) {
      mu *= trapezoid_weight(c[j], N);
      phase += k[j] * p[j];
    }
    mass_sum += mu * std::exp(cd(0.0, -1.0) * phase);
  }
  const double d2 = (P.theta - P.omega).squaredNorm();
  t.free = -(P.tau / 2.0) * d2 * g.cell_volume() * mass_sum;
  t.remainder = born_remainder(solver, op.potential().values, P, kind);
  t.residual = std::abs(t.lhs - (t.fourier + t.free + t.remainder)) / std::abs(t.lhs);
  return t;
}

cd recover_fourier_diff(const DiscreteOperator& op1, const DiscreteOperator& op2, const Eigen::VectorXd& xi,
                        const Eigen::VectorXd& eta, int m, TraceMode mode, PlaneWave kind) {
  require_same_grid(op1.grid(), op2.grid(), "recover_fourier_diff");
  const IsozakiParams P = make_params(xi, eta, m);
  return s_functional(op1, P, mode, kind) - s_functional(op2, P, mode, kind);
}

double RecoveryReport::error_on(const std::vector<bool>& mask) const {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!mask[i] || !admissible[i]) continue;
    num += std::norm(estimates[i] - truths[i]);
    den += std::norm(truths[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

std::string RecoveryReport::to_csv() const {
  std::ostringstream os;
  for (int j = 0; j < n; ++j) os << "k" << (j + 1) << ",";
  os << "re_est,im_est,re_true,im_true,abs_err\n";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!admissible[i]) continue;
    for (int j = 0; j < n; ++j) os << ks[i][j] << ",";
    os << fmt(estimates[i].real()) << "," << fmt(estimates[i].imag()) << "," << fmt(truths[i].real()) << ","
       << fmt(truths[i].imag()) << "," << fmt(std::abs(estimates[i] - truths[i])) << "\n";
  }
  return os.str();
}

RecoveryReport recover_field_diff(const DiscreteOperator& op1, const DiscreteOperator& op2, int k_max, int m,
                                  TraceMode mode, PlaneWave kind) {
  require_same_grid(op1.grid(), op2.grid(), "recover_field_diff");
  if (k_max < 1) throw Error(ErrorCode::RangeError, "k_max must be at least 1");
  const Grid& g = op1.grid();
  const int n = g.dims();
  RecoveryReport rep;
  rep.m = m;
  rep.n = n;
  const int side = 2 * k_max + 1;
  const int total = n == 2 ? side * side : side * side * side;
  for (int t = 0; t < total; ++t) {
    Eigen::VectorXi k(n);
    int r = t;
    for (int j = n - 1; j >= 0; --j) {
      k[j] = r % side - k_max;
      r /= side;
    }
    rep.ks.push_back(k);
  }
  const std::size_t count = rep.ks.size();
  rep.admissible.assign(count, false);
  rep.estimates.assign(count, cd(0.0));
  rep.truths.assign(count, cd(0.0));

  const cd tau = isozaki_tau(m);
  const ShiftedSolver s1(op1, tau);
  const ShiftedSolver s2(op2, tau);
  const Eigen::VectorXd dq = op1.potential().values - op2.potential().values;
  std::vector<char> adm(count, 0);
  parallel_for(count, [&](std::size_t i) {
    Eigen::VectorXd xi = 2.0 * std::numbers::pi * rep.ks[i].cast<double>();
    if (rep.ks[i].isZero()) xi[0] = 1e-6;
    if (xi.norm() >= 2.0 * m) return;
    const IsozakiParams P = make_params(xi, default_eta(xi), m);
    adm[i] = 1;
    rep.estimates[i] = s_functional(s1, P, mode, kind) - s_functional(s2, P, mode, kind);
    rep.truths[i] = interior_fourier(g, dq, xi.cast<cd>());
  });
  for (std::size_t i = 0; i < count; ++i) rep.admissible[i] = adm[i] != 0;
  rep.error = rep.error_on(std::vector<bool>(count, true));

  rep.recovered_field = Eigen::VectorXd::Zero(g.interior_count());
  for (std::size_t i = 0; i < count; ++i) {
    if (!rep.admissible[i]) continue;
    const Eigen::VectorXd xi = 2.0 * std::numbers::pi * rep.ks[i].cast<double>();
    for (Index p = 0; p < g.interior_count(); ++p) {
      const double phase = xi.dot(g.interior_position(p).head(n));
      rep.recovered_field[p] += (rep.estimates[i] * std::exp(cd(0.0, phase))).real();
    }
  }
  const double dn = dq.norm();
  rep.field_error = dn > 0.0 ? (rep.recovered_field - dq).norm() / dn : rep.recovered_field.norm();
  return rep;
}

std::vector<double> remainder_decay(const DiscreteOperator& op, const Eigen::VectorXd& xi, const Eigen::VectorXd& eta,
                                    const std::vector<int>& m_list, TraceMode mode, PlaneWave kind) {
  if (mode != TraceMode::onesided2 && mode != TraceMode::variational) throw Error(ErrorCode::BadMode, "trace mode");
  for (std::size_t i = 1; i < m_list.size(); ++i)
    if (m_list[i] <= m_list[i - 1]) throw Error(ErrorCode::RangeError, "m_list must be increasing");
  std::vector<double> out(m_list.size());
  parallel_for(m_list.size(), [&](std::size_t i) {
    const IsozakiParams P = make_params(xi, eta, m_list[i]);
    const ShiftedSolver solver(op, P.tau);
    out[i] = std::abs(born_remainder(solver, op.potential().values, P, kind));
  });
  return out;
}

}  // namespace bll
