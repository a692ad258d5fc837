#include "bll/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "bll/error.hpp"
#include "bll/lanczos.hpp"
#include "bll/norms.hpp"

namespace bll {

std::string to_string(TraceMode mode) {
  return mode == TraceMode::onesided2 ? "onesided2" : "variational";
}

TraceMode trace_mode_from_string(const std::string& s) {
  if (s == "onesided2") return TraceMode::onesided2;
  if (s == "variational") return TraceMode::variational;
  throw Error(ErrorCode::BadMode, "unknown trace mode '" + s + "'");
}

namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Index best = 0;
  double mag = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > mag) {
      mag = std::abs(v[i]);
      best = i;
    }
  }
  if (v[best] < 0) v = -v;
}

}  // namespace

SpectralData compute_spectrum(const DiscreteOperator& op, Index K, double tol) {
  SpectrumOptions opts;
  opts.tol = tol;
  return compute_spectrum(op, K, opts);
}

SpectralData compute_spectrum(const DiscreteOperator& op, Index K, const SpectrumOptions& opts) {
  const Index n = op.dimension();
  if (K > n) throw Error(ErrorCode::KTooLarge, "K = " + std::to_string(K) + " exceeds dimension " + std::to_string(n));
  if (K < 1) throw Error(ErrorCode::KTooLarge, "K must be positive");
  if (!(opts.tol > 0.0)) throw Error(ErrorCode::ConvergenceFailure, "tolerance must be positive");

  SpectralData sd{op.grid()};
  sd.potential = op.potential().values;
  sd.operator_id = op.id();
  if (n <= opts.dense_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(op.matrix())};
    if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "dense eigensolver failed");
    sd.values = es.eigenvalues().head(K);
    sd.vectors = es.eigenvectors().leftCols(K);
  } else {
    LanczosOptions lo;
    lo.block = opts.block;
    lo.seed = opts.seed;
    lo.tol = opts.tol;
    const double lb = op.spectrum_lower_bound();
    lo.shift = lb - std::max(1.0, 0.01 * std::abs(lb));
    LanczosResult r = lowest_eigenpairs(op.matrix(), K, lo);
    sd.values = std::move(r.values);
    sd.vectors = std::move(r.vectors);
  }
  const double scale = 1.0 / std::sqrt(op.grid().cell_volume());
  sd.vectors *= scale;
  sd.residuals.resize(K);
  for (Index k = 0; k < K; ++k) {
    fix_sign(sd.vectors.col(k));
    const Eigen::VectorXd r = op.matrix() * sd.vectors.col(k) - sd.values[k] * sd.vectors.col(k);
    sd.residuals[k] = lp_norm(r, 2.0, op.grid());
    if (sd.residuals[k] > 1e-8 * std::abs(sd.values[k]) + 1e-8)
      throw Error(ErrorCode::ConvergenceFailure, "eigenpair " + std::to_string(k + 1) + " residual too large");
  }
  return sd;
}

SpectralData shift_to_positive(SpectralData sd) {
  if (sd.count() == 0) return sd;
  const double lambda0 = std::max(0.0, -sd.values[0]) + 1.0;
  sd.values.array() += lambda0;
  sd.shift += lambda0;
  return sd;
}

Eigen::VectorXd eigen_trace(const Grid& grid, const Eigen::VectorXd& phi, TraceMode mode) {
  const Index nB = grid.boundary_count();
  Eigen::VectorXd t(nB);
  const double h = grid.h();
  for (Index b = 0; b < nB; ++b) {
    const BoundaryDof& d = grid.boundary_dof(b);
    if (mode == TraceMode::onesided2)
      t[b] = (-4.0 * phi[d.inner1] + phi[d.inner2]) / (2.0 * h);
    else
      t[b] = -phi[d.inner1] / h;
  }
  return t;
}

SpectralData neumann_traces(SpectralData sd, TraceMode mode) {
  if (mode != TraceMode::onesided2 && mode != TraceMode::variational)
    throw Error(ErrorCode::BadMode, "unknown trace mode");
  sd.traces.resize(sd.grid.boundary_count(), sd.count());
  for (Index k = 0; k < sd.count(); ++k) sd.traces.col(k) = eigen_trace(sd.grid, sd.vectors.col(k), mode);
  sd.trace_mode = mode;
  return sd;
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double weyl_constant(int n, double volume) {
  return 4.0 * std::numbers::pi * std::numbers::pi / std::pow(unit_ball_volume(n) * volume, 2.0 / n);
}

WeylFit weyl_fit(const SpectralData& sd, Index k_lo, Index k_hi) {
  if (k_lo < 1 || k_hi > sd.count() || k_hi - k_lo < 20)
    throw Error(ErrorCode::RangeTooSmall, "fit range [" + std::to_string(k_lo) + ", " + std::to_string(k_hi) +
                                              "] needs 1 <= k_lo, k_hi <= K and k_hi - k_lo >= 20");
  const Eigen::VectorXd lam = sd.unshifted_values();
  const Index m = k_hi - k_lo + 1;
  Eigen::MatrixXd X(m, 2);
  Eigen::VectorXd y(m);
  for (Index i = 0; i < m; ++i) {
    const Index k = k_lo + i;
    if (lam[k - 1] <= 0.0) throw Error(ErrorCode::NonPositiveSpectrum, "Weyl fit needs positive eigenvalues");
    X(i, 0) = std::log(static_cast<double>(k));
    X(i, 1) = 1.0;
    y[i] = std::log(lam[k - 1]);
  }
  const Eigen::Vector2d c = X.colPivHouseholderQr().solve(y);
  WeylFit fit;
  fit.exponent = c[0];
  fit.constant = std::exp(c[1]);
  fit.predicted_exponent = 2.0 / sd.grid.dims();
  fit.predicted_constant = weyl_constant(sd.grid.dims());
  return fit;
}

double eigen_ratio_tail(const SpectralData& sd_q, const SpectralData& sd_0, Index k_lo) {
  require_same_grid(sd_q.grid, sd_0.grid, "eigen_ratio_tail");
  const Index K = std::min(sd_q.count(), sd_0.count());
  if (k_lo < 1 || k_lo > K) throw Error(ErrorCode::RangeTooSmall, "k_lo outside the computed range");
  const Eigen::VectorXd a = sd_q.unshifted_values();
  const Eigen::VectorXd b = sd_0.unshifted_values();
  double worst = 0.0;
  for (Index k = k_lo - 1; k < K; ++k) worst = std::max(worst, std::abs(a[k] / b[k] - 1.0));
  return worst;
}

NormGrowth eig_norm_growth(const SpectralData& sd) {
  const SpectralData pos = sd.count() && sd.values[0] <= 0.0 ? shift_to_positive(sd) : sd;
  NormGrowth g;
  for (Index k = 0; k < sd.count(); ++k) {
    const Eigen::VectorXd phi = sd.vectors.col(k);
    g.spectral.push_back(spectral_sobolev_norm(phi, 2.0, pos) / (pos.values[k] + 1.0));
    const double w22 = lp_norm(phi, 2.0, sd.grid) + grad_norm(phi, sd.grid) + hessian_norm(phi, sd.grid);
    g.difference.push_back(w22 / (std::abs(sd.values[k]) + 1.0));
  }
  return g;
}

Eigen::VectorXd laplacian_eigenvalues(int n, int N, Index K) {
  const double h = 1.0 / N;
  std::vector<double> s(N - 1);
  for (int k = 1; k < N; ++k) {
    const double v = std::sin(k * std::numbers::pi * h / 2.0);
    s[k - 1] = 4.0 / (h * h) * v * v;
  }
  std::vector<double> all;
  if (n == 2) {
    for (double a : s)
      for (double b : s) all.push_back(a + b);
  } else {
    for (double a : s)
      for (double b : s)
        for (double c : s) all.push_back(a + b + c);
  }
  std::sort(all.begin(), all.end());
  K = std::min<Index>(K, static_cast<Index>(all.size()));
  return Eigen::Map<Eigen::VectorXd>(all.data(), K);
}

}  // namespace bll
