#include "bll/resolvent.hpp"

#include <cmath>

#include <Eigen/SparseCholesky>

#include "bll/error.hpp"
#include "bll/norms.hpp"

namespace bll {

ShiftedSolver::ShiftedSolver(const DiscreteOperator& op, cd lambda)
    : grid_(op.grid()), operator_id_(op.id()), lambda_(lambda) {
  const Index n = op.dimension();
  shifted_ = op.matrix().cast<cd>();
  for (Index i = 0; i < n; ++i) shifted_.coeffRef(i, i) -= lambda;
  shifted_.makeCompressed();
  lu_.compute(shifted_);
  if (lu_.info() != Eigen::Success)
    throw Error(ErrorCode::NearSingular, "factorization of A - lambda I failed (lambda on the spectrum)");

  // A few steps of power iteration on the inverse.
  Eigen::VectorXcd x(n);
  for (Index i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i) + 0.3);
  x.normalize();
  double growth = 0.0;
  for (int it = 0; it < 4; ++it) {
    Eigen::VectorXcd y = lu_.solve(x);
    growth = y.norm();
    if (!std::isfinite(growth))
      throw Error(ErrorCode::NearSingular, "A - lambda I is numerically singular");
    x = y / growth;
  }
  double anorm = 0.0;
  for (Index k = 0; k < shifted_.outerSize(); ++k) {
    double col = 0.0;
    for (Eigen::SparseMatrix<cd>::InnerIterator it(shifted_, k); it; ++it) col += std::abs(it.value());
    anorm = std::max(anorm, col);
  }
  condition_ = anorm * growth;
  if (condition_ > 1e14)
    throw Error(ErrorCode::NearSingular, "estimated condition " + std::to_string(condition_) + " exceeds 1e14");
}

Eigen::VectorXcd ShiftedSolver::solve(const Eigen::VectorXcd& rhs) const {
  if (rhs.size() != shifted_.rows()) throw Error(ErrorCode::ShapeMismatch, "resolvent right-hand side length");
  Eigen::VectorXcd u = lu_.solve(rhs);
  const double scale = rhs.norm();
  if (scale == 0.0) return u;
  Eigen::VectorXcd r = rhs - shifted_ * u;
  if (r.norm() > 1e-12 * scale) {
    u += lu_.solve(r);
    r = rhs - shifted_ * u;
  }
  if (r.norm() > 1e-10 * scale) throw Error(ErrorCode::NearSingular, "resolvent solve residual above 1e-10");
  return u;
}

Eigen::MatrixXcd ShiftedSolver::solve(const Eigen::MatrixXcd& rhs) const {
  Eigen::MatrixXcd u(rhs.rows(), rhs.cols());
  for (Index j = 0; j < rhs.cols(); ++j) u.col(j) = solve(Eigen::VectorXcd(rhs.col(j)));
  return u;
}

std::shared_ptr<const ShiftedSolver> FactorCache::get(const DiscreteOperator& op, cd lambda) {
  const Key key{op.id(), op.grid().dims(), op.grid().points_per_axis(), lambda.real(), lambda.imag()};
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
  }
  auto solver = std::make_shared<const ShiftedSolver>(op, lambda);
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.emplace(key, std::move(solver)).first->second;
}

std::size_t FactorCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

void FactorCache::clear() {
  std::lock_guard<std::mutex> lock(mu_);
  entries_.clear();
}

FactorCache& global_factor_cache() {
  static FactorCache cache;
  return cache;
}

Eigen::VectorXcd apply_resolvent_direct(const DiscreteOperator& op, cd lambda, const Eigen::VectorXcd& f) {
  return ShiftedSolver(op, lambda).solve(f);
}

Eigen::VectorXcd apply_resolvent_series(const SpectralData& sd, cd lambda, const Eigen::VectorXcd& f, Index K) {
  if (K < 0 || K > sd.count()) throw Error(ErrorCode::KTooLarge, "series truncation exceeds computed pairs");
  if (f.size() != sd.vectors.rows()) throw Error(ErrorCode::ShapeMismatch, "series right-hand side length");
  for (Index k = 0; k < K; ++k)
    if (std::abs(sd.values[k] - lambda) <= 1e-8 * std::max(1.0, std::abs(sd.values[k])))
      throw Error(ErrorCode::SpectrumHit, "lambda within 1e-8 of eigenvalue " + std::to_string(k + 1));
  const double w = sd.grid.cell_volume();
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(f.size());
  for (Index k = 0; k < K; ++k) {
    const auto phi = sd.vectors.col(k);
    const cd c = w * (phi.cast<cd>().cwiseProduct(f)).sum();
    u += (c / (sd.values[k] - lambda)) * phi.cast<cd>();
  }
  return u;
}

Eigen::VectorXd random_field(Index size, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::VectorXd v(size);
  for (Index i = 0; i < size; ++i) v[i] = uni(rng);
  return v;
}

namespace {

constexpr int kProbeSteps = 8;

// Inverse iteration from f; pulls a random field toward the mode that realises the resolvent norm.
template <class Solve>
Eigen::VectorXcd probe(Eigen::VectorXcd f, const Grid& grid, Solve&& solve) {
  for (int s = 0; s < kProbeSteps; ++s) {
    f = solve(f);
    f /= lp_norm(f, 2.0, grid);
  }
  return f;
}

}  // namespace

double check_im_bound(const DiscreteOperator& op, cd lambda, int trials, unsigned seed) {
  if (lambda.imag() == 0.0) throw Error(ErrorCode::BadQuery, "check_im_bound needs Im lambda != 0");
  if (trials < 1) throw Error(ErrorCode::BadQuery, "trials must be positive");
  const ShiftedSolver solver(op, lambda);
  const Grid& g = op.grid();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  auto ratio = [&](const Eigen::VectorXcd& f) {
    return lp_norm(solver.solve(f), 2.0, g) * std::abs(lambda.imag()) / lp_norm(f, 2.0, g);
  };
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXcd f = random_field(op.dimension(), rng).cast<cd>();
    worst = std::max(worst, ratio(f));
    if (t == 0) worst = std::max(worst, ratio(probe(f, g, [&](const Eigen::VectorXcd& v) { return solver.solve(v); })));
  }
  return worst;
}

double check_lp_bound(const SpectralData& sd, int m, int trials, unsigned seed) {
  if (sd.count() == 0 || sd.values.minCoeff() <= 0.0)
    throw Error(ErrorCode::NonPositiveSpectrum, "check_lp_bound needs a shifted positive spectrum");
  const ExponentSet ex = ExponentSet::for_dimension(sd.grid.dims());
  const cd tau = isozaki_tau(m);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Eigen::VectorXd f = random_field(sd.vectors.rows(), rng);
    const Eigen::VectorXcd u = apply_resolvent_series(sd, tau, f.cast<cd>(), sd.count());
    worst = std::max(worst, lp_norm(u, ex.p_high, sd.grid) / (std::abs(tau.imag()) * lp_norm(f, ex.p_low, sd.grid)));
  }
  return worst;
}

double sup_ratio(const SpectralData& sd, int m) {
  const cd tau = isozaki_tau(m);
  double worst = 0.0;
  for (Index k = 0; k < sd.count(); ++k)
    worst = std::max(worst, std::abs(sd.values[k] / (sd.values[k] - tau)));
  return worst;
}

std::vector<double> check_real_decay(const DiscreteOperator& op, const std::vector<double>& lambdas, int trials,
                                     unsigned seed) {
  const double bottom = op.spectrum_lower_bound();
  const Grid& g = op.grid();
  std::mt19937_64 rng(seed);
  std::vector<Eigen::VectorXcd> fields;
  for (int t = 0; t < trials; ++t) fields.push_back(random_field(op.dimension(), rng).cast<cd>());
  {
    Eigen::SparseMatrix<double> shifted = op.matrix();
    for (Index i = 0; i < shifted.rows(); ++i) shifted.coeffRef(i, i) -= bottom - 1.0;
    const Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(shifted);
    fields.push_back(probe(fields.front(), g, [&](const Eigen::VectorXcd& v) {
      return Eigen::VectorXcd(llt.solve(v.real()).cast<cd>());
    }));
  }
  std::vector<double> out;
  for (double lambda : lambdas) {
    if (lambda >= bottom) throw Error(ErrorCode::BadQuery, "lambda must lie below the spectrum");
    const ShiftedSolver solver(op, lambda);
    double worst = 0.0;
    for (const auto& f : fields)
      worst = std::max(worst, lp_norm(solver.solve(f), 2.0, g) * std::abs(lambda) / lp_norm(f, 2.0, g));
    out.push_back(worst);
  }
  return out;
}

std::vector<double> agmon_ratio(const DiscreteOperator& op, const std::vector<double>& lambdas, int trials,
                                unsigned seed, double p) {
  const Grid& g = op.grid();
  std::vector<Eigen::VectorXd> fields;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) fields.push_back(random_field(op.dimension(), rng));
  std::vector<double> out;
  for (double lambda : lambdas) {
    const double a = std::abs(lambda);
    double worst = 0.0;
    for (const Eigen::VectorXd& u : fields) {
      const Eigen::VectorXd r = op.matrix() * u - lambda * u;
      const double num = a * lp_norm(u, p, g) + std::sqrt(a) * grad_norm(u, g, p) + hessian_norm(u, g, p);
      worst = std::max(worst, num / lp_norm(r, p, g));
    }
    out.push_back(worst);
  }
  return out;
}

}  // namespace bll
