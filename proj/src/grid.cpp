#include "bll/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "bll/error.hpp"

namespace bll {

struct Grid::Tables {
  std::vector<Index> interior_nodes;
  std::vector<Index> lattice_interior;
  std::vector<Index> lattice_boundary;
  std::vector<BoundaryDof> dofs;
  BoundaryCalculus calculus;
};

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
using SparseRow = std::map<Index, double>;

BoundaryCalculus build_calculus(const Grid& g, const std::vector<BoundaryDof>& dofs) {
  const int n = g.dims();
  const int N = g.points_per_axis();
  const double h = g.h();
  const Index M = g.lattice_count();
  const Index nB = g.boundary_count();

  // Extension rows, filled for face nodes first and then by increasing
  // number of boundary axes.
  std::vector<SparseRow> rows(M);
  for (Index b = 0; b < nB; ++b) rows[dofs[b].node][b] = 1.0;
  for (int level = 2; level <= n; ++level) {
    for (Index x = 0; x < M; ++x) {
      if (g.boundary_axes(x) != level) continue;
      Coords c = g.coords(x);
      SparseRow acc;
      for (int d = 0; d < n; ++d) {
        if (c[d] != 0 && c[d] != N) continue;
        const int s = c[d] == 0 ? 1 : -1;
        Coords c1 = c, c2 = c;
        c1[d] += s;
        c2[d] += 2 * s;
        for (const auto& [j, v] : rows[g.node(c1)]) acc[j] += 2.0 * v / level;
        for (const auto& [j, v] : rows[g.node(c2)]) acc[j] -= v / level;
      }
      rows[x] = std::move(acc);
    }
  }
  Triplets tp;
  for (Index x = 0; x < M; ++x)
    for (const auto& [j, v] : rows[x]) tp.emplace_back(x, j, v);
  BoundaryCalculus bc;
  bc.extension.resize(M, nB);
  bc.extension.setFromTriplets(tp.begin(), tp.end());

  // Trapezoid-weighted energy restricted to boundary lattice nodes.
  const double stiff = std::pow(h, n - 2);
  Triplets tk, tm;
  for (Index x = 0; x < M; ++x) {
    const Coords c = g.coords(x);
    const bool xb = g.interior_of(x) < 0;
    if (xb) {
      double mu = 1.0;
      for (int d = 0; d < n; ++d) mu *= trapezoid_weight(c[d], N);
      tm.emplace_back(x, x, mu * g.cell_volume());
    }
    for (int d = 0; d < n; ++d) {
      if (c[d] == N) continue;
      Coords cy = c;
      cy[d] += 1;
      const Index y = g.node(cy);
      const bool yb = g.interior_of(y) < 0;
      if (!xb && !yb) continue;
      double w = 1.0;
      for (int e = 0; e < n; ++e)
        if (e != d) w *= trapezoid_weight(c[e], N);
      const double k = w * stiff;
      if (xb) tk.emplace_back(x, x, k);
      if (yb) tk.emplace_back(y, y, k);
      if (xb && yb) {
        tk.emplace_back(x, y, -k);
        tk.emplace_back(y, x, -k);
      }
    }
  }
  Eigen::SparseMatrix<double> K(M, M), Mm(M, M);
  K.setFromTriplets(tk.begin(), tk.end());
  Mm.setFromTriplets(tm.begin(), tm.end());
  const Eigen::SparseMatrix<double> Pt = bc.extension.transpose();
  bc.stiffness = (Pt * K * bc.extension) / g.face_area();
  bc.mass = (Pt * Mm * bc.extension) / g.face_area();
  bc.stiffness.prune(0.0);
  bc.mass.prune(0.0);

  Triplets tc;
  tc.reserve(nB);
  for (Index b = 0; b < nB; ++b) tc.emplace_back(dofs[b].inner1, b, 1.0 / (h * h));
  bc.coupling.resize(g.interior_count(), nB);
  bc.coupling.setFromTriplets(tc.begin(), tc.end());
  return bc;
}

}  // namespace

Grid::Grid(int n, int N)
    : n_(n), N_(N), h_(1.0 / N), cell_volume_(std::pow(1.0 / N, n)),
      face_area_(std::pow(1.0 / N, n - 1)) {}

Grid Grid::build(int n_dims, int points_per_axis) {
  if (n_dims != 2 && n_dims != 3)
    throw Error(ErrorCode::UnsupportedDim, "dimension " + std::to_string(n_dims) + " (expected 2 or 3)");
  if (points_per_axis < 4)
    throw Error(ErrorCode::GridTooSmall, "N = " + std::to_string(points_per_axis) + " (need N >= 4)");
  Grid g(n_dims, points_per_axis);
  auto t = std::make_shared<Tables>();
  const Index M = g.lattice_count();
  t->lattice_interior.assign(M, -1);
  t->lattice_boundary.assign(M, -1);
  t->interior_nodes.reserve(g.interior_count());
  for (Index x = 0; x < M; ++x) {
    if (g.boundary_axes(x) == 0) {
      t->lattice_interior[x] = static_cast<Index>(t->interior_nodes.size());
      t->interior_nodes.push_back(x);
    }
  }
  const int N = points_per_axis;
  for (int axis = 0; axis < n_dims; ++axis) {
    for (int side : {-1, 1}) {
      for (Index x = 0; x < M; ++x) {
        const Coords c = g.coords(x);
        if (g.boundary_axes(x) != 1) continue;
        if (c[axis] != (side < 0 ? 0 : N)) continue;
        BoundaryDof dof;
        dof.axis = axis;
        dof.side = side;
        dof.node = x;
        Coords c1 = c, c2 = c;
        c1[axis] -= side;
        c2[axis] -= 2 * side;
        dof.inner1 = t->lattice_interior[g.node(c1)];
        dof.inner2 = t->lattice_interior[g.node(c2)];
        t->lattice_boundary[x] = static_cast<Index>(t->dofs.size());
        t->dofs.push_back(dof);
      }
    }
  }
  g.t_ = t;
  t->calculus = build_calculus(g, t->dofs);
  return g;
}

Index Grid::interior_count() const {
  Index c = 1;
  for (int d = 0; d < n_; ++d) c *= N_ - 1;
  return c;
}

Index Grid::boundary_count() const {
  Index c = 2 * n_;
  for (int d = 1; d < n_; ++d) c *= N_ - 1;
  return c;
}

Index Grid::lattice_count() const {
  Index c = 1;
  for (int d = 0; d < n_; ++d) c *= N_ + 1;
  return c;
}

Coords Grid::coords(Index node) const {
  Coords c{0, 0, 0};
  for (int d = n_ - 1; d >= 0; --d) {
    c[d] = static_cast<int>(node % (N_ + 1));
    node /= N_ + 1;
  }
  return c;
}

Index Grid::node(const Coords& c) const {
  Index x = 0;
  for (int d = 0; d < n_; ++d) x = x * (N_ + 1) + c[d];
  return x;
}

Point Grid::position(Index node) const {
  const Coords c = coords(node);
  Point p = Point::Zero();
  for (int d = 0; d < n_; ++d) p[d] = c[d] * h_;
  return p;
}

int Grid::boundary_axes(Index node) const {
  const Coords c = coords(node);
  int b = 0;
  for (int d = 0; d < n_; ++d) b += (c[d] == 0 || c[d] == N_) ? 1 : 0;
  return b;
}

Index Grid::interior_node(Index i) const { return t_->interior_nodes.at(i); }
Index Grid::interior_of(Index node) const { return t_->lattice_interior.at(node); }
const BoundaryDof& Grid::boundary_dof(Index b) const { return t_->dofs.at(b); }
Index Grid::boundary_of(Index node) const { return t_->lattice_boundary.at(node); }
const BoundaryCalculus& Grid::calculus() const { return t_->calculus; }

Point Grid::outward_normal(Index b) const {
  const BoundaryDof& d = boundary_dof(b);
  Point v = Point::Zero();
  v[d.axis] = d.side;
  return v;
}

void require_same_grid(const Grid& a, const Grid& b, std::string_view what) {
  if (a != b)
    throw Error(ErrorCode::GridMismatch,
                std::string(what) + ": grids differ (n=" + std::to_string(a.dims()) + ", N=" +
                    std::to_string(a.points_per_axis()) + " vs n=" + std::to_string(b.dims()) +
                    ", N=" + std::to_string(b.points_per_axis()) + ")");
}

Eigen::VectorXcd extend_to_lattice(const Grid& grid, const Eigen::VectorXcd& interior,
                                   const Eigen::VectorXcd& boundary) {
  if (interior.size() != grid.interior_count() || boundary.size() != grid.boundary_count())
    throw Error(ErrorCode::ShapeMismatch, "extend_to_lattice: field length does not match grid");
  Eigen::VectorXcd full = grid.calculus().extension.cast<std::complex<double>>() * boundary;
  for (Index i = 0; i < interior.size(); ++i) full[grid.interior_node(i)] = interior[i];
  return full;
}

}  // namespace bll
