#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace bll {

using Index = Eigen::Index;
using Coords = std::array<int, 3>;
using Point = Eigen::Vector3d;

// A face-interior boundary node.  side is -1 on the face at coordinate 0 and
// +1 on the face at coordinate N, so the outward normal is side * e_axis.
struct BoundaryDof {
  int axis = 0;
  int side = -1;
  Index node = 0;
  Index inner1 = 0;  // interior index one step inward
  Index inner2 = 0;  // interior index two steps inward
};

// Sparse pieces of the discrete boundary calculus.
//   extension: lattice nodes x boundary DOFs; identity on face nodes, linear
//              extrapolation onto edges and corners, zero on interior rows.
//   coupling:  interior x boundary DOFs, 1/h^2 at (inner1(b), b).
//   stiffness, mass: boundary-DOF forms of the trapezoid-weighted energy,
//              already divided by the face weight h^{n-1}.
struct BoundaryCalculus {
  Eigen::SparseMatrix<double> extension;
  Eigen::SparseMatrix<double> coupling;
  Eigen::SparseMatrix<double> stiffness;
  Eigen::SparseMatrix<double> mass;
};

class Grid {
 public:
  static Grid build(int n_dims, int points_per_axis);

  int dims() const { return n_; }
  int points_per_axis() const { return N_; }
  double h() const { return h_; }
  double cell_volume() const { return cell_volume_; }
  double face_area() const { return face_area_; }

  Index interior_count() const;
  Index boundary_count() const;
  Index lattice_count() const;

  Coords coords(Index node) const;
  Index node(const Coords& c) const;
  Point position(Index node) const;
  int boundary_axes(Index node) const;

  Index interior_node(Index i) const;
  Index interior_of(Index node) const;  // -1 when not interior
  Point interior_position(Index i) const { return position(interior_node(i)); }

  const BoundaryDof& boundary_dof(Index b) const;
  Index boundary_of(Index node) const;  // -1 when not a face DOF
  Point boundary_position(Index b) const { return position(boundary_dof(b).node); }
  Point outward_normal(Index b) const;

  const BoundaryCalculus& calculus() const;

  bool operator==(const Grid& o) const { return n_ == o.n_ && N_ == o.N_; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  struct Tables;
  Grid(int n, int N);

  int n_ = 3;
  int N_ = 4;
  double h_ = 0.25;
  double cell_volume_ = 0.0;
  double face_area_ = 0.0;
  std::shared_ptr<const Tables> t_;
};

void require_same_grid(const Grid& a, const Grid& b, std::string_view what);

// Weight 1/2 on a boundary coordinate, 1 otherwise (trapezoid rule).
inline double trapezoid_weight(int c, int N) { return (c == 0 || c == N) ? 0.5 : 1.0; }

// Interior values plus extended boundary values on the full lattice.
Eigen::VectorXcd extend_to_lattice(const Grid& grid, const Eigen::VectorXcd& interior,
                                   const Eigen::VectorXcd& boundary);

}  // namespace bll
