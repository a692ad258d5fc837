#include "support.hpp"

#include "bll/norms.hpp"
#include "bll/spectrum.hpp"

using namespace bll;
using namespace testing;

TEST_CASE("exponent set") {
  const ExponentSet e = ExponentSet::for_dimension(3);
  CHECK(e.p_low == doctest::Approx(1.2));
  CHECK(e.p_high == doctest::Approx(6.0));
  CHECK(e.p_half == doctest::Approx(1.5));
  CHECK(1.0 / e.p_low + 1.0 / e.p_high == doctest::Approx(1.0));
}

TEST_CASE("lp norm of constants") {
  const Grid g = Grid::build(3, 16);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(g.interior_count());
  for (double p : {1.0, 2.0, 3.5})
    CHECK(lp_norm(one, p, g) == doctest::Approx(std::pow(3375.0 / 4096.0, 1.0 / p)).epsilon(1e-13));
  CHECK(lp_norm(one, INFINITY, g) == 1.0);
  CHECK_CODE(lp_norm(one, 0.5, g), ErrorCode::BadExponent);
  const Eigen::VectorXd fb = Eigen::VectorXd::Ones(g.boundary_count());
  CHECK(boundary_norm(fb, 2.0, g) == doctest::Approx(std::sqrt(1350.0 / 256.0)).epsilon(1e-13));
  CHECK(boundary_norm(Eigen::VectorXd::Zero(g.boundary_count()), 2.0, g) == 0.0);
}

TEST_CASE("boundary norm of unit-modulus data") {
  const Grid g = Grid::build(3, 16);
  Eigen::VectorXcd f(g.boundary_count());
  const Eigen::Vector3d w(0.6, 0.8, 0.0);
  for (Index b = 0; b < f.size(); ++b) f[b] = std::exp(std::complex<double>(0, 7.0 * w.dot(g.boundary_position(b))));
  CHECK(boundary_norm(f, 2.0, g) == doctest::Approx(std::sqrt(1350.0 / 256.0)).epsilon(1e-13));
}

TEST_CASE("gradient norm: summation by parts") {
  for (int n : {2, 3}) {
    const Grid g = Grid::build(n, 10);
    const DiscreteOperator A = make_op(n, 10);
    CHECK(grad_norm(Eigen::VectorXd::Zero(g.interior_count()), g) == 0.0);
    const Eigen::VectorXd u = random_vector(g.interior_count(), 7);
    const double lhs = std::pow(grad_norm(u, g), 2);
    const double rhs = g.cell_volume() * u.dot(A.matrix() * u);
    CHECK(rel(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("gradient and spectral norms of eigenfunctions") {
  const Grid g = Grid::build(3, 8);
  const SpectralData sd = compute_spectrum(make_op(3, 8), 4);
  for (Index k = 0; k < 4; ++k) {
    const Eigen::VectorXd phi = sd.vectors.col(k);
    CHECK(lp_norm(phi, 2.0, g) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(grad_norm(phi, g) == doctest::Approx(std::sqrt(sd.values[k])).epsilon(1e-10));
  }
  const Eigen::VectorXd p1 = sd.vectors.col(0), p2 = sd.vectors.col(1);
  for (double s : {0.0, 0.7, 2.0})
    CHECK(spectral_sobolev_norm(p1, s, sd) == doctest::Approx(std::pow(sd.values[0], s / 2)).epsilon(1e-10));
  CHECK(spectral_sobolev_norm(Eigen::VectorXd(p1 + p2), 1.0, sd) ==
        doctest::Approx(std::sqrt(sd.values[0] + sd.values[1])).epsilon(1e-10));
  // s = 0 equals the L2 norm of the projection
  const Eigen::VectorXd u = random_vector(g.interior_count(), 2);
  const Eigen::VectorXd proj = sd.vectors * (g.cell_volume() * sd.vectors.transpose() * u);
  CHECK(spectral_sobolev_norm(u, 0.0, sd) == doctest::Approx(lp_norm(proj, 2.0, g)).epsilon(1e-10));
}

TEST_CASE("hessian norm: summation by parts") {
  // zero-extended fields satisfy sum over all second differences squared = |Delta_h u|^2
  for (int n : {2, 3}) {
    const Grid g = Grid::build(n, 9);
    const DiscreteOperator A = make_op(n, 9);
    const Eigen::VectorXd u = random_vector(g.interior_count(), 11);
    const double lhs = std::pow(hessian_norm(u, g), 2);
    const double rhs = g.cell_volume() * (A.matrix() * u).squaredNorm();
    CHECK(rel(lhs, rhs) < 1e-12);
    CHECK(hessian_norm(Eigen::VectorXd(Eigen::VectorXd::Zero(g.interior_count())), g) == 0.0);
  }
}

TEST_CASE("spectral sobolev norm needs positive spectrum") {
  const Grid g = Grid::build(2, 6);
  SpectralData sd = compute_spectrum(make_op(2, 6), 3);
  sd.values[0] = -1.0;
  CHECK_CODE(spectral_sobolev_norm(Eigen::VectorXd(sd.vectors.col(0)), 1.0, sd), ErrorCode::NonPositiveSpectrum);
}
