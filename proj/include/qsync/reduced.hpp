#pragma once

// Exact N=2 reduction of the normalized model under a constant communication
// kernel. With z = <phi_1, phi_2>, frequencies +-Omega and a constant kernel
// (the only case where the theta dynamics close over (z, lambda, theta)), the
// full PDE system reduces to a 6-real-dimensional ODE:
//
//   dz/dt  = 2i Omega z
//          + (k/4) ((th1 l2^2 + th2 l1^2)/(l1 l2)) (1 - z^2)
//          + (i k/4) ((l2/l1)(th1 - 1) + (l1/l2)(th2 - 1)) Im(z) z
//   dl1/dt = (k/4) (l1 + l2 Re z)(th1 - 1)
//   dl2/dt = (k/4) (l2 + l1 Re z)(th2 - 1)
//   dth1/dt = (mu c / 2)(th2 - th1) = -dth2/dt
//
// The frozen-parameter limit (theta = lambda = 1) is the Riccati flow
//   dy/dt = 2i Omega y + (Omega/Lambda)(1 - y^2),
// whose behavior is governed by Lambda = 4 Omega l1 l2 / (k (l1^2 + l2^2)):
// exponential sync below 1, linear-rate sync at 1, periodic orbits above.

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qsync/errors.hpp"

namespace qsync {
namespace reduced {

using Complex = std::complex<double>;

struct ReducedState {
  Complex z{0.0, 0.0};
  double lambda1 = 1.0, lambda2 = 1.0;
  double theta1 = 1.0, theta2 = 1.0;
  double time = 0.0;
};

struct ReducedParams {
  double omega = 0.0;     // half-difference of the two natural frequencies
  double k = 1.0;         // coupling, > 0
  double mu = 0.0;        // consensus strength
  double kernel_c = 1.0;  // constant kernel value
};

inline double lambda_param(double omega, double k, double lam1_bar, double lam2_bar) {
  if (omega < 0.0) throw DomainError("lambda_param: omega must be nonnegative");
  if (!(k > 0.0) || !(lam1_bar > 0.0) || !(lam2_bar > 0.0))
    throw DomainError("lambda_param: k and the limiting masses must be positive");
  return 4.0 * omega * lam1_bar * lam2_bar / (k * (lam1_bar * lam1_bar + lam2_bar * lam2_bar));
}

struct ReducedDeriv {
  Complex dz{0.0, 0.0};
  double dlambda1 = 0.0, dlambda2 = 0.0;
  double dtheta1 = 0.0, dtheta2 = 0.0;
};

inline ReducedDeriv reduced_rhs(const ReducedState& s, const ReducedParams& p) {
  if (!(s.lambda1 > 0.0) || !(s.lambda2 > 0.0))
    throw DomainError("reduced_rhs: masses must be positive");
  const Complex I(0.0, 1.0);
  double l1 = s.lambda1, l2 = s.lambda2;
  double th1 = s.theta1, th2 = s.theta2;
  ReducedDeriv d;
  double rez = s.z.real(), imz = s.z.imag();
  d.dz = 2.0 * p.omega * I * s.z +
         0.25 * p.k * ((th1 * l2 * l2 + th2 * l1 * l1) / (l1 * l2)) * (1.0 - s.z * s.z) +
         0.25 * p.k * I * ((l2 / l1) * (th1 - 1.0) + (l1 / l2) * (th2 - 1.0)) * imz * s.z;
  d.dlambda1 = 0.25 * p.k * (l1 + l2 * rez) * (th1 - 1.0);
  d.dlambda2 = 0.25 * p.k * (l2 + l1 * rez) * (th2 - 1.0);
  d.dtheta1 = 0.5 * p.mu * p.kernel_c * (th2 - th1);
  d.dtheta2 = 0.5 * p.mu * p.kernel_c * (th1 - th2);
  return d;
}

namespace detail {

inline ReducedState axpy(const ReducedState& s, const ReducedDeriv& d, double a) {
  ReducedState out = s;
  out.z += a * d.dz;
  out.lambda1 += a * d.dlambda1;
  out.lambda2 += a * d.dlambda2;
  out.theta1 += a * d.dtheta1;
  out.theta2 += a * d.dtheta2;
  return out;
}

}  // namespace detail

inline ReducedState rk4_step(const ReducedState& s, const ReducedParams& p, double dt) {
  ReducedDeriv k1 = reduced_rhs(s, p);
  ReducedDeriv k2 = reduced_rhs(detail::axpy(s, k1, 0.5 * dt), p);
  ReducedDeriv k3 = reduced_rhs(detail::axpy(s, k2, 0.5 * dt), p);
  ReducedDeriv k4 = reduced_rhs(detail::axpy(s, k3, dt), p);
  ReducedDeriv acc;
  acc.dz = (k1.dz + 2.0 * k2.dz + 2.0 * k3.dz + k4.dz) / 6.0;
  acc.dlambda1 = (k1.dlambda1 + 2.0 * k2.dlambda1 + 2.0 * k3.dlambda1 + k4.dlambda1) / 6.0;
  acc.dlambda2 = (k1.dlambda2 + 2.0 * k2.dlambda2 + 2.0 * k3.dlambda2 + k4.dlambda2) / 6.0;
  acc.dtheta1 = (k1.dtheta1 + 2.0 * k2.dtheta1 + 2.0 * k3.dtheta1 + k4.dtheta1) / 6.0;
  acc.dtheta2 = (k1.dtheta2 + 2.0 * k2.dtheta2 + 2.0 * k3.dtheta2 + k4.dtheta2) / 6.0;
  return detail::axpy(s, acc, dt);
}

// RK4 trajectory sampled every sample_every steps (the final state always
// included). Time is reported as t0 + i*dt.
inline std::vector<ReducedState> integrate_reduced(const ReducedState& s0,
                                                   const ReducedParams& p, double dt,
                                                   double t_final,
                                                   long long sample_every = 1) {
  if (!(dt > 0.0) || !(t_final >= dt))
    throw DomainError("integrate_reduced: need dt > 0 and t_final >= dt");
  if (sample_every < 1) throw DomainError("integrate_reduced: sample_every must be >= 1");
  long long steps = std::llround(t_final / dt);
  if (steps < 1) steps = 1;
  std::vector<ReducedState> out;
  out.reserve(static_cast<std::size_t>(steps / sample_every) + 2);
  ReducedState s = s0;
  out.push_back(s);
  for (long long i = 1; i <= steps; ++i) {
    s = rk4_step(s, p, dt);
    s.time = s0.time + static_cast<double>(i) * dt;
    if (i % sample_every == 0 || i == steps) out.push_back(s);
  }
  return out;
}

// Fixed points of the frozen z-flow: z = sqrt(1 - Lambda^2) +- ... both on the
// unit circle with imaginary part Lambda; they merge at i when Lambda = 1 and
// leave the circle for Lambda > 1.
inline std::pair<Complex, Complex> fixed_points(double lambda_cap) {
  if (lambda_cap < 0.0 || lambda_cap > 1.0)
    throw DomainError("fixed_points: no unit-circle fixed points for Lambda > 1 "
                      "(periodic regime); need 0 <= Lambda <= 1");
  double s = std::sqrt(std::max(0.0, 1.0 - lambda_cap * lambda_cap));
  return {Complex(s, lambda_cap), Complex(-s, lambda_cap)};
}

// Closed-form solution of dy/dt = 2i Omega y + (Omega/Lambda)(1 - y^2).
//
// Factoring the right-hand side as -(Omega/Lambda)(y - z1)(y - z2) shows
// w = (y - z1)/(y - z2) decays exactly at rate (2 Omega/Lambda) sqrt(1-Lambda^2),
// and -z2 = conj(z1), so
//   y(t) = (z1 + conj(z1) w0 E(t)) / (1 - w0 E(t)),  w0 = (y0 - z1)/(y0 + conj(z1)).
// The same factor w0 appears in numerator and denominator; see the test suite
// for the variant with a mismatched conjugation, which fails the RK4 oracle.
inline Complex y_exact(double t, Complex y0, double omega, double lambda_cap) {
  if (!(lambda_cap > 0.0) || lambda_cap > 1.0)
    throw DomainError("y_exact: Lambda must lie in (0, 1]");
  if (!(omega > 0.0)) throw DomainError("y_exact: omega must be positive");
  const Complex I(0.0, 1.0);
  if (lambda_cap == 1.0) {
    // dy/dt = Omega (1 + 2iy - y^2) = -Omega (y - i)^2
    if (std::abs(y0 - I) < 1e-14) return I;
    return I + 1.0 / (omega * t + 1.0 / (y0 - I));
  }
  auto [z1, z2] = fixed_points(lambda_cap);
  if (std::abs(y0 - z2) < 1e-12)
    throw DomainError("y_exact: y0 = z2 is the excluded (unstable) initial condition");
  Complex w0 = (y0 - z1) / (y0 + std::conj(z1));
  double rate = 2.0 * omega / lambda_cap * std::sqrt(1.0 - lambda_cap * lambda_cap);
  Complex we = w0 * std::exp(-rate * t);
  Complex denom = 1.0 - we;
  if (std::abs(denom) < 1e-12)
    throw DomainError("y_exact: solution passes through a pole on [0, t]");
  return (z1 + std::conj(z1) * we) / denom;
}

// Expected asymptotics by the size of Lambda.
struct RegimeDescriptor {
  int regime = 1;  // 1: exponential, 2: linear rate, 3: periodic
  Complex stable_limit{1.0, 0.0};
  Complex unstable_limit{-1.0, 0.0};
  bool has_limits = true;
  std::string rate_type;  // "exponential", "linear", "periodic"
};

inline RegimeDescriptor classify(double lambda_cap) {
  if (lambda_cap < 0.0) throw DomainError("classify: Lambda must be nonnegative");
  RegimeDescriptor d;
  if (lambda_cap < 1.0) {
    auto [z1, z2] = fixed_points(lambda_cap);
    d.regime = 1;
    d.stable_limit = z1;
    d.unstable_limit = z2;
    d.rate_type = "exponential";
  } else if (lambda_cap == 1.0) {
    d.regime = 2;
    d.stable_limit = Complex(0.0, 1.0);
    d.unstable_limit = Complex(0.0, 1.0);
    d.rate_type = "linear";
  } else {
    d.regime = 3;
    d.has_limits = false;
    d.rate_type = "periodic";
  }
  return d;
}

}  // namespace reduced
}  // namespace qsync
