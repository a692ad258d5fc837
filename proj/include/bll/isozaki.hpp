#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "bll/dnmap.hpp"

namespace bll {

struct IsozakiParams {
  int n = 3;
  int m = 2;
  Eigen::VectorXd xi;
  Eigen::VectorXd eta;
  double c_m = 1.0;
  Eigen::VectorXd theta;
  Eigen::VectorXd omega;
  cd sqrt_tau;
  cd tau;
};

IsozakiParams make_params(const Eigen::VectorXd& xi, const Eigen::VectorXd& eta, int m);

// Unit vector orthogonal to xi built from the coordinate axis where |xi_j| is smallest.
Eigen::VectorXd default_eta(const Eigen::VectorXd& xi);

// sampled: e^{i k.x} at lattice points.  lattice: e^{i kappa.x} with
// kappa_j = (2/h) asin(k_j h/2), an exact discrete solution of -Delta_h u = k.k u.
enum class PlaneWave { sampled, lattice };
std::string to_string(PlaneWave w);
PlaneWave plane_wave_from_string(const std::string& s);

// Square root with the cut on the positive real axis (Im >= 0).
cd branch_sqrt(cd lambda);

// Wave e^{i sqrt(lambda) d.x} on every lattice node.
Eigen::VectorXcd plane_wave_lattice(const Grid& grid, cd lambda, const Eigen::VectorXcd& d, PlaneWave kind);
Eigen::VectorXcd cgo_boundary(cd lambda, const Eigen::VectorXcd& d, const Grid& grid,
                              PlaneWave kind = PlaneWave::sampled);

cd s_functional(const DiscreteOperator& op, const IsozakiParams& P, TraceMode mode,
                PlaneWave kind = PlaneWave::lattice);
cd s_functional(const ShiftedSolver& solver, const IsozakiParams& P, TraceMode mode,
                PlaneWave kind = PlaneWave::lattice);

struct BornTerms {
  cd lhs;
  cd fourier;
  cd free;
  cd remainder;
  double residual = 0.0;
};

BornTerms born_decomposition(const DiscreteOperator& op, const IsozakiParams& P, TraceMode mode,
                             PlaneWave kind = PlaneWave::lattice);

// -sum h^n (R(tau)(q psi_omega)) (q psi_-theta), bilinear.
cd born_remainder(const ShiftedSolver& solver, const Eigen::VectorXd& q, const IsozakiParams& P, PlaneWave kind);

// sum over interior nodes of h^n e^{-i k.x} v(x).
cd interior_fourier(const Grid& grid, const Eigen::VectorXd& v, const Eigen::VectorXcd& k);

cd recover_fourier_diff(const DiscreteOperator& op1, const DiscreteOperator& op2, const Eigen::VectorXd& xi,
                        const Eigen::VectorXd& eta, int m, TraceMode mode, PlaneWave kind = PlaneWave::lattice);

struct RecoveryReport {
  int m = 0;
  int n = 3;
  std::vector<Eigen::VectorXi> ks;
  std::vector<bool> admissible;
  std::vector<cd> estimates;
  std::vector<cd> truths;
  double error = 0.0;
  double field_error = 0.0;
  Eigen::VectorXd recovered_field;

  // Relative l2 error over the frequencies selected by mask.
  double error_on(const std::vector<bool>& mask) const;
  std::string to_csv() const;
};

RecoveryReport recover_field_diff(const DiscreteOperator& op1, const DiscreteOperator& op2, int k_max, int m,
                                  TraceMode mode, PlaneWave kind = PlaneWave::lattice);

std::vector<double> remainder_decay(const DiscreteOperator& op, const Eigen::VectorXd& xi, const Eigen::VectorXd& eta,
                                    const std::vector<int>& m_list, TraceMode mode,
                                    PlaneWave kind = PlaneWave::sampled);

}  // namespace bll
