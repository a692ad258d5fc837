#pragma once

#include <complex>

#include <Eigen/Core>

#include "bll/grid.hpp"
#include "bll/spectral_data.hpp"

namespace bll {

struct ExponentSet {
  int n = 3;
  double p_low = 1.2;
  double p_high = 6.0;
  double p_half = 1.5;

  static ExponentSet for_dimension(int n);
};

// (w * sum |a|^p)^{1/p}, or max |a| for p = inf.
double weighted_lp(const Eigen::VectorXd& abs_values, double p, double weight);

template <class Derived>
double lp_norm(const Eigen::MatrixBase<Derived>& u, double p, const Grid& grid) {
  return weighted_lp(u.cwiseAbs(), p, grid.cell_volume());
}

template <class Derived>
double boundary_norm(const Eigen::MatrixBase<Derived>& f, double p, const Grid& grid) {
  return weighted_lp(f.cwiseAbs(), p, grid.face_area());
}

// Forward differences of the zero-extended field, one entry per (axis, cell).
Eigen::VectorXcd first_differences(const Eigen::VectorXcd& u, const Grid& grid);
// Centered pure second differences at interior nodes and forward-forward mixed
// differences over cells; each mixed entry stands for both orderings.
struct SecondDifferences {
  Eigen::VectorXcd pure;
  Eigen::VectorXcd mixed;
};
SecondDifferences second_differences(const Eigen::VectorXcd& u, const Grid& grid);

double grad_norm(const Eigen::VectorXcd& u, const Grid& grid, double p = 2.0);
double hessian_norm(const Eigen::VectorXcd& u, const Grid& grid, double p = 2.0);

template <class Derived>
double grad_norm(const Eigen::MatrixBase<Derived>& u, const Grid& grid, double p = 2.0) {
  return grad_norm(Eigen::VectorXcd(u.template cast<std::complex<double>>()), grid, p);
}
template <class Derived>
double hessian_norm(const Eigen::MatrixBase<Derived>& u, const Grid& grid, double p = 2.0) {
  return hessian_norm(Eigen::VectorXcd(u.template cast<std::complex<double>>()), grid, p);
}

// h^n sum a_i b_i, and the boundary analogue with h^{n-1}; no conjugation.
template <class A, class B>
auto volume_dot(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b, const Grid& grid) {
  return grid.cell_volume() * (a.cwiseProduct(b)).sum();
}
template <class A, class B>
auto boundary_dot(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b, const Grid& grid) {
  return grid.face_area() * (a.cwiseProduct(b)).sum();
}

double spectral_sobolev_norm(const Eigen::VectorXcd& u, double s, const SpectralData& sd);

template <class Derived>
double spectral_sobolev_norm(const Eigen::MatrixBase<Derived>& u, double s, const SpectralData& sd) {
  return spectral_sobolev_norm(Eigen::VectorXcd(u.template cast<std::complex<double>>()), s, sd);
}

}  // namespace bll
