#include "support.hpp"

#include <set>

#include "bll/grid.hpp"
#include "bll/hamiltonian.hpp"
#include "bll/potential.hpp"

using namespace bll;
using namespace testing;

TEST_CASE("grid counts") {
  const Grid g3 = Grid::build(3, 16);
  CHECK(g3.interior_count() == 3375);
  CHECK(g3.boundary_count() == 1350);
  CHECK(g3.h() == 0.0625);
  const Grid g2 = Grid::build(2, 4);
  CHECK(g2.interior_count() == 9);
  CHECK(g2.boundary_count() == 12);
  CHECK(g2.h() == 0.25);
  CHECK_CODE(Grid::build(3, 2), ErrorCode::GridTooSmall);
  CHECK_CODE(Grid::build(4, 8), ErrorCode::UnsupportedDim);
}

TEST_CASE("grid index bijections") {
  for (int n : {2, 3}) {
    const Grid g = Grid::build(n, 6);
    std::set<Index> seen;
    for (Index i = 0; i < g.interior_count(); ++i) {
      const Index node = g.interior_node(i);
      CHECK(g.interior_of(node) == i);
      CHECK(g.boundary_axes(node) == 0);
      seen.insert(node);
    }
    CHECK(seen.size() == static_cast<std::size_t>(g.interior_count()));
    for (Index b = 0; b < g.boundary_count(); ++b) {
      const BoundaryDof& d = g.boundary_dof(b);
      CHECK(g.boundary_of(d.node) == b);
      CHECK(g.boundary_axes(d.node) == 1);
      // inward line of length two
      const Point x = g.position(d.node), nu = g.outward_normal(b);
      CHECK((g.interior_position(d.inner1) - (x - g.h() * nu)).norm() < 1e-14);
      CHECK((g.interior_position(d.inner2) - (x - 2 * g.h() * nu)).norm() < 1e-14);
    }
  }
}

TEST_CASE("potential sampling") {
  const Grid g = Grid::build(3, 16);
  CHECK(sample_potential(PotentialDescriptor::zero(), g).values.cwiseAbs().maxCoeff() == 0.0);
  const PotentialField bump = sample_potential(PotentialDescriptor::sine_bump(5.0), g);
  const Index centre = g.interior_of(g.node({8, 8, 8}));
  CHECK(bump.values[centre] == doctest::Approx(5.0).epsilon(1e-15));
  const PotentialField sing = sample_potential(PotentialDescriptor::singular(1.0, Point(0.5, 0.5, 0.5)), g);
  CHECK(sing.values[centre] == doctest::Approx(32.0).epsilon(1e-14));
  CHECK(sing.values.allFinite());
  CHECK(std::isfinite(sing.ln_half_norm));
  CHECK(sing.values.maxCoeff() <= 32.0 + 1e-12);
}

TEST_CASE("potential hash separates fields") {
  const Grid g = Grid::build(3, 8);
  const auto a = sample_potential(PotentialDescriptor::sine_bump(5.0), g);
  const auto b = sample_potential(PotentialDescriptor::sine_bump(5.0), g);
  const auto c = sample_potential(PotentialDescriptor::sine_bump(5.5), g);
  CHECK(a.hash == b.hash);
  CHECK(a.hash != c.hash);
}

TEST_CASE("hamiltonian stencil") {
  const Grid g = Grid::build(3, 16);
  const DiscreteOperator A0 = assemble_hamiltonian(g, sample_potential(PotentialDescriptor::zero(), g));
  const auto& M = A0.matrix();
  for (int k = 0; k < M.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(M, k); it; ++it) {
      if (it.row() == it.col()) CHECK(it.value() == 1536.0);
      else CHECK(it.value() == -256.0);
    }
  const DiscreteOperator A1 = assemble_hamiltonian(g, sample_potential(PotentialDescriptor::sine_bump(5.0), g));
  const Index centre = g.interior_of(g.node({8, 8, 8}));
  CHECK(A1.matrix().coeff(centre, centre) == doctest::Approx(1541.0).epsilon(1e-15));
  const Eigen::SparseMatrix<double> At = A1.matrix().transpose();
  CHECK((A1.matrix() - At).norm() == 0.0);
}

TEST_CASE("hamiltonian matches coordinate-built dense laplacian") {
  const Grid g = Grid::build(3, 5);
  const DiscreteOperator A = make_op(3, 5);
  CHECK((Eigen::MatrixXd(A.matrix()) - dense_laplacian(g)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("boundary lifting") {
  const Grid g = Grid::build(3, 12);
  const BoundaryLifting lift(g);
  CHECK(lift.apply(Eigen::VectorXd(Eigen::VectorXd::Zero(g.boundary_count()))).cwiseAbs().maxCoeff() == 0.0);

  const Eigen::VectorXd one = Eigen::VectorXd::Ones(g.boundary_count());
  const Eigen::VectorXd u = lift.apply(one);
  CHECK(u.maxCoeff() <= 1.0);
  CHECK(u.minCoeff() > 0.0);
  // dense oracle: (-Delta_h + 1) u = C f
  Eigen::MatrixXd D = dense_laplacian(g) + Eigen::MatrixXd::Identity(g.interior_count(), g.interior_count());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(g.interior_count());
  for (Index b = 0; b < g.boundary_count(); ++b) rhs[g.boundary_dof(b).inner1] += 1.0 / (g.h() * g.h());
  const Eigen::VectorXd ref = D.ldlt().solve(rhs);
  CHECK((u - ref).cwiseAbs().maxCoeff() < 1e-12);

  const Eigen::VectorXcd f = random_vector(g.boundary_count(), 4).cast<std::complex<double>>();
  const Eigen::VectorXcd full = extend_to_lattice(g, lift.apply(f), f);
  for (Index b = 0; b < g.boundary_count(); ++b) CHECK(full[g.boundary_dof(b).node] == f[b]);
}
