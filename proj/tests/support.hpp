#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <doctest.h>

#include "bll/error.hpp"
#include "bll/hamiltonian.hpp"

#define CHECK_CODE(expr, ec)                                    \
  do {                                                          \
    bool thrown_ = false;                                       \
    try {                                                       \
      (void)(expr);                                             \
    } catch (const bll::Error& e_) {                            \
      thrown_ = true;                                           \
      CHECK_MESSAGE(e_.code() == (ec), e_.what());              \
    }                                                           \
    CHECK_MESSAGE(thrown_, "expected an error from " #expr);    \
  } while (0)

namespace testing {

constexpr double pi = std::numbers::pi;

inline bll::DiscreteOperator make_op(int n, int N, const bll::PotentialDescriptor& d = bll::PotentialDescriptor::zero()) {
  const bll::Grid g = bll::Grid::build(n, N);
  return bll::assemble_hamiltonian(g, bll::sample_potential(d, g));
}

// Dense copy of the discrete Laplacian built from coordinates alone.
inline Eigen::MatrixXd dense_laplacian(const bll::Grid& g) {
  const Eigen::Index m = g.interior_count();
  const double ih2 = 1.0 / (g.h() * g.h());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    A(i, i) = 2.0 * g.dims() * ih2;
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto a = g.coords(g.interior_node(i)), b = g.coords(g.interior_node(j));
      int dist = 0;
      for (int d = 0; d < 3; ++d) dist += std::abs(a[d] - b[d]);
      if (dist == 1) A(i, j) = -ih2;
    }
  }
  return A;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testing
