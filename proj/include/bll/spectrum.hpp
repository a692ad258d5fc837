#pragma once

#include <vector>

#include "bll/hamiltonian.hpp"
#include "bll/spectral_data.hpp"

namespace bll {

struct SpectrumOptions {
  double tol = 1e-10;
  Index dense_limit = 2000;
  int block = 8;
  unsigned seed = 1;
};

SpectralData compute_spectrum(const DiscreteOperator& op, Index K, double tol = 1e-10);
SpectralData compute_spectrum(const DiscreteOperator& op, Index K, const SpectrumOptions& opts);

// Adds lambda_0 = max(0, -lambda_1) + 1 to every eigenvalue.
SpectralData shift_to_positive(SpectralData sd);

SpectralData neumann_traces(SpectralData sd, TraceMode mode);

// Normal derivative of an interior field vanishing on the boundary.
Eigen::VectorXd eigen_trace(const Grid& grid, const Eigen::VectorXd& phi, TraceMode mode);

struct WeylFit {
  double exponent = 0.0;
  double constant = 0.0;
  double predicted_exponent = 0.0;
  double predicted_constant = 0.0;
};

double unit_ball_volume(int n);
double weyl_constant(int n, double volume = 1.0);
WeylFit weyl_fit(const SpectralData& sd, Index k_lo, Index k_hi);

double eigen_ratio_tail(const SpectralData& sd_q, const SpectralData& sd_0, Index k_lo);

struct NormGrowth {
  std::vector<double> spectral;
  std::vector<double> difference;
};
NormGrowth eig_norm_growth(const SpectralData& sd);

// Closed-form Dirichlet eigenvalues of -Delta_h on the unit box, ascending.
Eigen::VectorXd laplacian_eigenvalues(int n, int N, Index K);

}  // namespace bll
