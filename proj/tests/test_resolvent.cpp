#include "support.hpp"

#include "bll/norms.hpp"
#include "bll/resolvent.hpp"
#include "bll/spectrum.hpp"

using namespace bll;
using namespace testing;

TEST_CASE("direct resolvent on a single mode") {
  const DiscreteOperator A = make_op(3, 8, PotentialDescriptor::sine_bump(5.0));
  const SpectralData sd = compute_spectrum(A, 3);
  const Eigen::VectorXcd phi = sd.vectors.col(0).cast<cd>();
  const Eigen::VectorXcd u = apply_resolvent_direct(A, -1.0, phi);
  CHECK((u - phi / (sd.values[0] + 1.0)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_CODE(apply_resolvent_direct(A, sd.values[0], phi), ErrorCode::NearSingular);
}

TEST_CASE("direct resolvent against a dense eigendecomposition") {
  const DiscreteOperator A = make_op(3, 8, PotentialDescriptor::gaussian(30.0, Point(0.4, 0.5, 0.5), 0.15));
  Eigen::MatrixXd D = dense_laplacian(A.grid());
  D.diagonal() += A.potential().values;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D);
  const Eigen::VectorXcd f = random_vector(A.dimension(), 5).cast<cd>();
  for (cd lam : {cd(-50.0, 0.0), cd(100.0, 3.0), cd(900.0, -0.5)}) {
    const Eigen::VectorXcd c = es.eigenvectors().transpose().cast<cd>() * f;
    Eigen::VectorXcd w(c.size());
    for (Index k = 0; k < c.size(); ++k) w[k] = c[k] / (es.eigenvalues()[k] - lam);
    const Eigen::VectorXcd ref = es.eigenvectors().cast<cd>() * w;
    CHECK((apply_resolvent_direct(A, lam, f) - ref).norm() / ref.norm() < 1e-8);
  }
}

TEST_CASE("series resolvent") {
  const DiscreteOperator A = make_op(3, 8);
  const Grid& g = A.grid();
  const SpectralData sd = compute_spectrum(A, A.dimension());
  const cd lam(40.0, 7.0);
  const Eigen::VectorXcd phi2 = sd.vectors.col(1).cast<cd>();
  for (Index K : {2, 5, 50})
    CHECK((apply_resolvent_series(sd, lam, phi2, K) - phi2 / (sd.values[1] - lam)).cwiseAbs().maxCoeff() < 1e-10);
  // orthogonal to the first K modes
  const Eigen::VectorXcd tail = sd.vectors.col(20).cast<cd>();
  CHECK(apply_resolvent_series(sd, lam, tail, 10).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::VectorXcd f = random_vector(g.interior_count(), 9).cast<cd>();
  const Eigen::VectorXcd a = apply_resolvent_series(sd, lam, f, sd.count());
  const Eigen::VectorXcd b = apply_resolvent_direct(A, lam, f);
  CHECK((a - b).norm() / b.norm() < 1e-8);
  CHECK_CODE(apply_resolvent_series(sd, sd.values[3], f, 10), ErrorCode::SpectrumHit);
}

TEST_CASE("imaginary-part bound") {
  const DiscreteOperator A = make_op(3, 8, PotentialDescriptor::sine_bump(5.0));
  for (cd lam : {cd(10.0, 1.0), cd(500.0, -30.0), cd(-100.0, 0.01)})
    CHECK(check_im_bound(A, lam, 4, 1) <= 1.0 + 1e-10);
  const SpectralData sd = compute_spectrum(A, 1);
  // near an eigenvalue the bound is attained
  const double near = check_im_bound(A, cd(sd.values[0], 1e-3), 4, 1);
  CHECK(near <= 1.0 + 1e-10);
  CHECK(near >= 1.0 - 1e-6);
  CHECK_CODE(check_im_bound(A, cd(-5.0, 0.0), 4, 1), ErrorCode::BadQuery);
}

TEST_CASE("sup ratio") {
  const Grid g = Grid::build(2, 4);
  SpectralData sd(g);
  sd.values = Eigen::VectorXd::Constant(1, 99.0);
  CHECK(sup_ratio(sd, 10) == doctest::Approx(4.95).epsilon(1e-14));
  for (int m : {5, 7, 12}) {
    sd.values[0] = m * m - 1.0;
    CHECK(sup_ratio(sd, m) == doctest::Approx((m * m - 1.0) / (2.0 * m)).epsilon(1e-14));
    CHECK(sup_ratio(sd, m) <= m);
  }
}

TEST_CASE("Lp bound ratio") {
  const DiscreteOperator A = make_op(3, 8, PotentialDescriptor::sine_bump(5.0));
  const SpectralData sd = shift_to_positive(compute_spectrum(A, 30));
  // one-mode spectral data makes every random field a multiple of phi_1
  SpectralData one(sd.grid);
  one.values = sd.values.head(1);
  one.vectors = sd.vectors.leftCols(1);
  const Eigen::VectorXd phi = sd.vectors.col(0);
  for (int m : {5, 10, 20, 40}) {
    const double ratio = check_lp_bound(one, m, 1, 2);
    std::mt19937_64 rng(2);
    const Eigen::VectorXd f = random_field(sd.vectors.rows(), rng);
    const double c = sd.grid.cell_volume() * phi.dot(f);
    const double expect = std::abs(c) * lp_norm(phi, 6.0, sd.grid) /
                          (2.0 * m * std::abs(sd.values[0] - isozaki_tau(m)) * lp_norm(f, 1.2, sd.grid));
    CHECK(ratio == doctest::Approx(expect).epsilon(1e-10));
  }
  CHECK(check_lp_bound(sd, 10, 3, 2) == check_lp_bound(sd, 10, 3, 2));
  const SpectralData twin = shift_to_positive(compute_spectrum(make_op(3, 8, PotentialDescriptor::sine_bump(5.0)), 30));
  CHECK(check_lp_bound(twin, 10, 3, 2) == check_lp_bound(sd, 10, 3, 2));
  SpectralData raw = compute_spectrum(A, 3);
  raw.values[0] = -1.0;
  CHECK_CODE(check_lp_bound(raw, 5, 1, 1), ErrorCode::NonPositiveSpectrum);
}

TEST_CASE("real-axis decay") {
  const DiscreteOperator A = make_op(3, 8);
  const double l1 = compute_spectrum(A, 1).values[0];
  const std::vector<double> lams{-1e2, -1e3, -1e4};
  const auto v = check_real_decay(A, lams, 5, 3);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double exact = -lams[i] / (l1 - lams[i]);
    CHECK(v[i] <= exact + 1e-10);
    CHECK(v[i] >= exact - 1e-8);
    if (i) CHECK(v[i] > v[i - 1]);
  }
  CHECK(check_real_decay(A, {0.0}, 3, 3)[0] == 0.0);
  CHECK(check_real_decay(A, {-1e4}, 3, 3)[0] == doctest::Approx(1e4 / (l1 + 1e4)).epsilon(1e-8));
  CHECK_CODE(check_real_decay(A, {l1 + 1.0}, 3, 3), ErrorCode::BadQuery);
}

TEST_CASE("agmon ratio") {
  const DiscreteOperator A = make_op(3, 12);
  const std::vector<double> lams{-1e2, -1e3, -1e4, -1e5};
  const auto r = agmon_ratio(A, lams, 3, 1, 2.0);
  for (double x : r) CHECK(x <= 3.0);
  // single-mode oracle tends to 1 as lambda -> -inf
  const double l1 = compute_spectrum(A, 1).values[0];
  const double lam = -1e5;
  const double single = (-lam + std::sqrt(-lam) * std::sqrt(l1) + l1) / (l1 - lam);
  CHECK(single == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.back() <= 3.0);
}

TEST_CASE("factor cache reuses factorizations") {
  const DiscreteOperator A = make_op(2, 8);
  FactorCache cache;
  auto a = cache.get(A, cd(1.0, 2.0));
  auto b = cache.get(A, cd(1.0, 2.0));
  auto c = cache.get(A, cd(1.0, 3.0));
  CHECK(a.get() == b.get());
  CHECK(a.get() != c.get());
  CHECK(cache.size() == 2);
  cache.clear();
  CHECK(cache.size() == 0);
}

TEST_CASE("isozaki spectral parameter") {
  CHECK(isozaki_tau(10) == cd(99.0, 20.0));
}
