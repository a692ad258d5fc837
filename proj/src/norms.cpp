#include "bll/norms.hpp"

#include <cmath>
#include <limits>

#include "bll/error.hpp"

namespace bll {

ExponentSet ExponentSet::for_dimension(int n) {
  if (n < 3) throw Error(ErrorCode::UnsupportedDim, "Sobolev exponents need n >= 3");
  ExponentSet e;
  e.n = n;
  e.p_low = 2.0 * n / (n + 2.0);
  e.p_high = 2.0 * n / (n - 2.0);
  e.p_half = n / 2.0;
  return e;
}

double weighted_lp(const Eigen::VectorXd& a, double p, double weight) {
  if (std::isinf(p) && p > 0) return a.size() ? a.maxCoeff() : 0.0;
  if (!(p >= 1.0)) throw Error(ErrorCode::BadExponent, "p = " + std::to_string(p) + " (need p >= 1)");
  double sum = 0.0;
  if (p == 2.0) {
    for (Index i = 0; i < a.size(); ++i) sum += a[i] * a[i];
    return std::sqrt(weight * sum);
  }
  if (p == 1.0) {
    for (Index i = 0; i < a.size(); ++i) sum += a[i];
    return weight * sum;
  }
  for (Index i = 0; i < a.size(); ++i) sum += std::pow(a[i], p);
  return std::pow(weight * sum, 1.0 / p);
}

namespace {

using cd = std::complex<double>;

cd value_at(const Eigen::VectorXcd& u, const Grid& g, const Coords& c) {
  const int N = g.points_per_axis();
  for (int d = 0; d < g.dims(); ++d)
    if (c[d] <= 0 || c[d] >= N) return 0.0;
  return u[g.interior_of(g.node(c))];
}

void check_length(const Eigen::VectorXcd& u, const Grid& g) {
  if (u.size() != g.interior_count())
    throw Error(ErrorCode::ShapeMismatch, "field length does not match interior count");
}

// Cells with coordinate range [0, N-1] on the listed axes and [1, N-1] elsewhere.
template <class F>
void for_cells(const Grid& g, std::array<bool, 3> open, F&& f) {
  const int n = g.dims();
  const int N = g.points_per_axis();
  Coords lo{0, 0, 0}, hi{0, 0, 0};
  for (int d = 0; d < n; ++d) {
    lo[d] = open[d] ? 0 : 1;
    hi[d] = N - 1;
  }
  Coords c = lo;
  while (true) {
    f(c);
    int d = n - 1;
    while (d >= 0 && c[d] == hi[d]) {
      c[d] = lo[d];
      --d;
    }
    if (d < 0) break;
    ++c[d];
  }
}

}  // namespace

Eigen::VectorXcd first_differences(const Eigen::VectorXcd& u, const Grid& g) {
  check_length(u, g);
  std::vector<cd> out;
  const double ih = 1.0 / g.h();
  for (int d = 0; d < g.dims(); ++d) {
    std::array<bool, 3> open{false, false, false};
    open[d] = true;
    for_cells(g, open, [&](const Coords& c) {
      Coords c1 = c;
      c1[d] += 1;
      out.push_back((value_at(u, g, c1) - value_at(u, g, c)) * ih);
    });
  }
  return Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Index>(out.size()));
}

SecondDifferences second_differences(const Eigen::VectorXcd& u, const Grid& g) {
  check_length(u, g);
  const int n = g.dims();
  const double ih2 = 1.0 / (g.h() * g.h());
  SecondDifferences sd;
  std::vector<cd> pure, mixed;
  for (int d = 0; d < n; ++d) {
    for_cells(g, {false, false, false}, [&](const Coords& c) {
      Coords cp = c, cm = c;
      cp[d] += 1;
      cm[d] -= 1;
      pure.push_back((value_at(u, g, cp) - 2.0 * value_at(u, g, c) + value_at(u, g, cm)) * ih2);
    });
  }
  for (int d = 0; d < n; ++d) {
    for (int e = d + 1; e < n; ++e) {
      std::array<bool, 3> open{false, false, false};
      open[d] = open[e] = true;
      for_cells(g, open, [&](const Coords& c) {
        Coords cd1 = c, ce1 = c, cde = c;
        cd1[d] += 1;
        ce1[e] += 1;
        cde[d] += 1;
        cde[e] += 1;
        mixed.push_back((value_at(u, g, cde) - value_at(u, g, cd1) - value_at(u, g, ce1) +
                         value_at(u, g, c)) * ih2);
      });
    }
  }
  sd.pure = Eigen::Map<Eigen::VectorXcd>(pure.data(), static_cast<Index>(pure.size()));
  sd.mixed = Eigen::Map<Eigen::VectorXcd>(mixed.data(), static_cast<Index>(mixed.size()));
  return sd;
}

double grad_norm(const Eigen::VectorXcd& u, const Grid& grid, double p) {
  return weighted_lp(first_differences(u, grid).cwiseAbs(), p, grid.cell_volume());
}

double hessian_norm(const Eigen::VectorXcd& u, const Grid& grid, double p) {
  const SecondDifferences sd = second_differences(u, grid);
  if (std::isinf(p)) {
    double m = sd.pure.size() ? sd.pure.cwiseAbs().maxCoeff() : 0.0;
    if (sd.mixed.size()) m = std::max(m, sd.mixed.cwiseAbs().maxCoeff());
    return m;
  }
  if (!(p >= 1.0)) throw Error(ErrorCode::BadExponent, "p = " + std::to_string(p) + " (need p >= 1)");
  const double w = grid.cell_volume();
  const double pure = std::pow(weighted_lp(sd.pure.cwiseAbs(), p, w), p);
  const double mixed = std::pow(weighted_lp(sd.mixed.cwiseAbs(), p, w), p);
  return std::pow(pure + 2.0 * mixed, 1.0 / p);
}

double spectral_sobolev_norm(const Eigen::VectorXcd& u, double s, const SpectralData& sd) {
  if (sd.count() == 0) return 0.0;
  if (sd.values.minCoeff() <= 0.0)
    throw Error(ErrorCode::NonPositiveSpectrum, "spectral Sobolev norm needs a positive spectrum");
  if (u.size() != sd.vectors.rows()) throw Error(ErrorCode::ShapeMismatch, "spectral_sobolev_norm: field length");
  const Eigen::VectorXcd c = sd.grid.cell_volume() * (sd.vectors.transpose().cast<cd>() * u);
  double sum = 0.0;
  for (Index k = 0; k < c.size(); ++k) sum += std::pow(sd.values[k], s) * std::norm(c[k]);
  return std::sqrt(sum);
}

}  // namespace bll
