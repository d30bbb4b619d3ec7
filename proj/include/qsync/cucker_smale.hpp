#pragma once

// Intrinsic-parameter dynamics: the consensus ODE
//   dtheta_j/dt = (mu/N) sum_k h(|x_j - x_k|) (theta_k - theta_j)
// driven by the oscillators' centers of mass, plus its diagnostics.
// The kernel h is radially symmetric and strictly positive, so the mean of
// theta is conserved and the spread contracts.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "qsync/errors.hpp"

namespace qsync {

using Center = std::array<double, 2>;  // zero-padded beyond the grid dim

struct KernelSpec {
  enum class Kind { Constant, Absolute, HeavyTail, Tabulated };
  Kind kind = Kind::HeavyTail;
  double constant_value = 1.0;  // Constant
  double c_floor = 0.0;         // Absolute: h = c_floor + amp (1+r^2)^{-gamma/2}
  double amp = 0.0;
  double gamma = 1.0;           // Absolute / HeavyTail exponent
  std::vector<double> radii;    // Tabulated: linear interp, constant extrapolation
  std::vector<double> values;

  static KernelSpec constant(double c) {
    if (!(c > 0.0)) throw DomainError("constant kernel: value must be positive");
    KernelSpec s;
    s.kind = Kind::Constant;
    s.constant_value = c;
    return s;
  }

  static KernelSpec absolute(double c_floor, double amp, double gamma) {
    if (!(c_floor > 0.0)) throw DomainError("absolute kernel: c_floor must be positive");
    if (amp < 0.0) throw DomainError("absolute kernel: amp must be nonnegative");
    if (!(gamma > 0.0)) throw DomainError("absolute kernel: gamma must be positive");
    KernelSpec s;
    s.kind = Kind::Absolute;
    s.c_floor = c_floor;
    s.amp = amp;
    s.gamma = gamma;
    return s;
  }

  // gamma <= 1 keeps the integral of h over [0,inf) divergent.
  static KernelSpec heavy_tail(double gamma) {
    if (!(gamma > 0.0) || gamma > 1.0)
      throw DomainError("heavy-tail kernel: gamma must lie in (0, 1]");
    KernelSpec s;
    s.kind = Kind::HeavyTail;
    s.gamma = gamma;
    return s;
  }

  static KernelSpec tabulated(std::vector<double> radii, std::vector<double> values) {
    if (radii.empty() || radii.size() != values.size())
      throw DomainError("tabulated kernel: radii and values must be nonempty and equal length");
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (radii[i] < 0.0) throw DomainError("tabulated kernel: radii must be nonnegative");
      if (i > 0 && !(radii[i] > radii[i - 1]))
        throw DomainError("tabulated kernel: radii must be strictly increasing");
      if (!(values[i] > 0.0)) throw DomainError("tabulated kernel: values must be positive");
    }
    KernelSpec s;
    s.kind = Kind::Tabulated;
    s.radii = std::move(radii);
    s.values = std::move(values);
    return s;
  }

  // inf_{r>=0} h(r); zero for a pure heavy tail.
  double infimum() const {
    switch (kind) {
      case Kind::Constant:
        return constant_value;
      case Kind::Absolute:
        return c_floor;
      case Kind::HeavyTail:
        return 0.0;
      case Kind::Tabulated: {
        double m = values.front();
        for (double v : values) m = std::min(m, v);
        return m;
      }
    }
    return 0.0;
  }
};

inline double kernel_eval(const KernelSpec& spec, double r) {
  if (r < 0.0) throw DomainError("kernel: radius must be nonnegative");
  switch (spec.kind) {
    case KernelSpec::Kind::Constant:
      return spec.constant_value;
    case KernelSpec::Kind::Absolute:
      return spec.c_floor + spec.amp * std::pow(1.0 + r * r, -spec.gamma / 2.0);
    case KernelSpec::Kind::HeavyTail:
      return std::pow(1.0 + r * r, -spec.gamma / 2.0);
    case KernelSpec::Kind::Tabulated: {
      if (r <= spec.radii.front()) return spec.values.front();
      if (r >= spec.radii.back()) return spec.values.back();
      std::size_t hi = 1;
      while (spec.radii[hi] < r) ++hi;
      double t = (r - spec.radii[hi - 1]) / (spec.radii[hi] - spec.radii[hi - 1]);
      return spec.values[hi - 1] + t * (spec.values[hi] - spec.values[hi - 1]);
    }
  }
  return 0.0;
}

struct ThetaState {
  std::vector<double> values;
};

inline void require_positive(const ThetaState& theta) {
  for (double v : theta.values)
    if (!(v > 0.0)) throw DomainError("theta values must be strictly positive");
}

inline double center_distance(const Center& a, const Center& b) {
  double d0 = a[0] - b[0], d1 = a[1] - b[1];
  return std::sqrt(d0 * d0 + d1 * d1);
}

inline std::vector<double> theta_rhs(const ThetaState& theta,
                                     const std::vector<Center>& centers,
                                     const KernelSpec& spec, double mu) {
  std::size_t n = theta.values.size();
  if (centers.size() != n)
    throw DomainError("theta_rhs: theta and centers lengths differ");
  if (mu < 0.0) throw DomainError("theta_rhs: mu must be nonnegative");
  std::vector<double> out(n, 0.0);
  if (mu == 0.0 || n == 0) return out;
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      acc += kernel_eval(spec, center_distance(centers[j], centers[k])) *
             (theta.values[k] - theta.values[j]);
    }
    out[j] = mu / static_cast<double>(n) * acc;
  }
  return out;
}

// max_j |theta_j - mean(theta)|
inline double theta_spread(const ThetaState& theta) {
  if (theta.values.empty()) throw DomainError("theta_spread: empty state");
  double mean = 0.0;
  for (double v : theta.values) mean += v;
  mean /= static_cast<double>(theta.values.size());
  double s = 0.0;
  for (double v : theta.values) s = std::max(s, std::abs(v - mean));
  return s;
}

// D(t) = max_{i,j} |x_i - x_j|
inline double pair_diameter(const std::vector<Center>& centers) {
  if (centers.empty()) throw DomainError("pair_diameter: empty set");
  double d = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      d = std::max(d, center_distance(centers[i], centers[j]));
  return d;
}

}  // namespace qsync
