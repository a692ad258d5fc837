#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <tuple>
#include <vector>

#include <Eigen/SparseLU>

#include "bll/hamiltonian.hpp"
#include "bll/spectral_data.hpp"

namespace bll {

using cd = std::complex<double>;

// Sparse LU of (A - lambda I), with a cheap inverse-norm estimate used to
// reject parameters too close to the spectrum.
class ShiftedSolver {
 public:
  ShiftedSolver(const DiscreteOperator& op, cd lambda);

  cd lambda() const { return lambda_; }
  const Grid& grid() const { return grid_; }
  std::uint64_t operator_id() const { return operator_id_; }
  double condition_estimate() const { return condition_; }

  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;

 private:
  Grid grid_;
  std::uint64_t operator_id_;
  cd lambda_;
  double condition_ = 0.0;
  Eigen::SparseMatrix<cd> shifted_;
  Eigen::SparseLU<Eigen::SparseMatrix<cd>, Eigen::COLAMDOrdering<int>> lu_;
};

// Factorizations keyed by (operator id, lambda); safe for concurrent use.
class FactorCache {
 public:
  std::shared_ptr<const ShiftedSolver> get(const DiscreteOperator& op, cd lambda);
  std::size_t size() const;
  void clear();

 private:
  using Key = std::tuple<std::uint64_t, int, int, double, double>;
  mutable std::mutex mu_;
  std::map<Key, std::shared_ptr<const ShiftedSolver>> entries_;
};

FactorCache& global_factor_cache();

Eigen::VectorXcd apply_resolvent_direct(const DiscreteOperator& op, cd lambda, const Eigen::VectorXcd& f);
Eigen::VectorXcd apply_resolvent_series(const SpectralData& sd, cd lambda, const Eigen::VectorXcd& f, Index K);

// Seeded fields with entries uniform in [-1, 1].
Eigen::VectorXd random_field(Index size, std::mt19937_64& rng);

double check_im_bound(const DiscreteOperator& op, cd lambda, int trials, unsigned seed);
double check_lp_bound(const SpectralData& sd, int m, int trials, unsigned seed);
double sup_ratio(const SpectralData& sd, int m);
std::vector<double> check_real_decay(const DiscreteOperator& op, const std::vector<double>& lambdas, int trials,
                                     unsigned seed);
std::vector<double> agmon_ratio(const DiscreteOperator& op, const std::vector<double>& lambdas, int trials,
                                unsigned seed, double p);

inline cd isozaki_tau(int m) { return cd(m, 1.0) * cd(m, 1.0); }

}  // namespace bll
