#include "bll/potential.hpp"

#include <cmath>
#include <cstring>
#include <numbers>

#include "bll/error.hpp"

namespace bll {

PotentialDescriptor PotentialDescriptor::sine_bump(double c) {
  PotentialDescriptor d;
  d.kind = Kind::sine_bump;
  d.amplitude = c;
  return d;
}

PotentialDescriptor PotentialDescriptor::gaussian(double amplitude, const Point& center, double width) {
  PotentialDescriptor d;
  d.kind = Kind::gaussian;
  d.amplitude = amplitude;
  d.center = center;
  d.width = width;
  return d;
}

PotentialDescriptor PotentialDescriptor::singular(double alpha, const Point& center, double amplitude) {
  PotentialDescriptor d;
  d.kind = Kind::singular;
  d.alpha = alpha;
  d.center = center;
  d.amplitude = amplitude;
  return d;
}

void PotentialDescriptor::validate(int n_dims) const {
  if (!std::isfinite(amplitude)) throw Error(ErrorCode::BadDescriptor, "amplitude must be finite");
  if (kind == Kind::gaussian && !(width > 0.0 && std::isfinite(width)))
    throw Error(ErrorCode::BadDescriptor, "gaussian width must be positive");
  if (kind == Kind::gaussian || kind == Kind::singular) {
    for (int d = 0; d < n_dims; ++d)
      if (!(center[d] > 0.0 && center[d] < 1.0))
        throw Error(ErrorCode::BadDescriptor, "center must lie inside the open unit box");
  }
  if (kind == Kind::singular && !(alpha > 0.0 && alpha < 2.0))
    throw Error(ErrorCode::BadDescriptor, "singular exponent alpha must lie in (0, 2)");
}

double PotentialDescriptor::evaluate(const Point& x, int n_dims, double h) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::sine_bump: {
      double v = amplitude;
      for (int d = 0; d < n_dims; ++d) v *= std::sin(std::numbers::pi * x[d]);
      return v;
    }
    case Kind::gaussian: {
      const double r2 = (x - center).head(n_dims).squaredNorm();
      return amplitude * std::exp(-r2 / (2.0 * width * width));
    }
    case Kind::singular: {
      const double r = (x - center).head(n_dims).norm();
      const double cap = std::pow(h / 2.0, -alpha);
      return amplitude * (r <= h / 2.0 ? cap : std::min(cap, std::pow(r, -alpha)));
    }
  }
  return 0.0;
}

std::string to_string(PotentialDescriptor::Kind kind) {
  switch (kind) {
    case PotentialDescriptor::Kind::zero: return "zero";
    case PotentialDescriptor::Kind::sine_bump: return "sine_bump";
    case PotentialDescriptor::Kind::gaussian: return "gaussian";
    case PotentialDescriptor::Kind::singular: return "singular";
  }
  return "zero";
}

PotentialDescriptor::Kind potential_kind_from_string(const std::string& s) {
  if (s == "zero") return PotentialDescriptor::Kind::zero;
  if (s == "sine_bump") return PotentialDescriptor::Kind::sine_bump;
  if (s == "gaussian") return PotentialDescriptor::Kind::gaussian;
  if (s == "singular") return PotentialDescriptor::Kind::singular;
  throw Error(ErrorCode::BadDescriptor, "unknown potential kind '" + s + "'");
}

std::uint64_t potential_hash(const Grid& grid, const Eigen::VectorXd& values) {
  std::uint64_t hash = 1469598103934665603ull;
  auto mix = [&hash](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      hash ^= p[i];
      hash *= 1099511628211ull;
    }
  };
  const std::int32_t shape[2] = {grid.dims(), grid.points_per_axis()};
  mix(shape, sizeof(shape));
  mix(values.data(), sizeof(double) * static_cast<std::size_t>(values.size()));
  return hash;
}

PotentialField potential_from_values(const Grid& grid, const Eigen::VectorXd& values) {
  if (values.size() != grid.interior_count())
    throw Error(ErrorCode::GridMismatch, "potential length does not match interior count");
  if (!values.allFinite()) throw Error(ErrorCode::BadDescriptor, "potential values must be finite");
  PotentialField q{grid, {}, values, 0.0, 0};
  const double p = grid.dims() / 2.0;
  q.ln_half_norm = std::pow(grid.cell_volume() * values.array().abs().pow(p).sum(), 1.0 / p);
  q.hash = potential_hash(grid, values);
  return q;
}

PotentialField sample_potential(const PotentialDescriptor& spec, const Grid& grid) {
  spec.validate(grid.dims());
  Eigen::VectorXd v(grid.interior_count());
  for (Index i = 0; i < v.size(); ++i)
    v[i] = spec.evaluate(grid.interior_position(i), grid.dims(), grid.h());
  PotentialField q = potential_from_values(grid, v);
  q.descriptor = spec;
  return q;
}

}  // namespace bll
