#pragma once

// Time evolution of the coupled systems. One step of the default integrator:
//   1. half-step of the exact H_j flow (potential/kinetic Strang inside),
//   2. one classical RK4 step of the joint non-Hamiltonian system (all
//      coupling increments and the theta ODE together, centers of mass
//      recomputed at every stage),
//   3. the second H_j half-step.
// The linear flow is integrated exactly in Fourier space, so dt is limited
// only by the coupling scales k and mu.
//
// oracle_step integrates the same semi-discrete system by plain RK4 with the
// Hamiltonian applied spectrally as a derivative (method of lines); it exists
// for cross-validation only.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "qsync/observables.hpp"
#include "qsync/state.hpp"

namespace qsync {

namespace detail {

inline int thread_cap() {
  static int cap = [] {
    const char* env = std::getenv("QSYNC_THREADS");
    if (!env) return 1;
    int v = std::atoi(env);
    return v > 0 ? v : 1;
  }();
  return cap;
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  int cap = thread_cap();
  if (cap <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t workers = std::min<std::size_t>(cap, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Right-hand sides

// Non-Hamiltonian part of d(psi_j)/dt in order-parameter form:
//   normalized   (k/2) (theta_j zeta - <zeta,psi_j>/||psi_j||^2 psi_j)
//   unnormalized (k/2) (theta_j zeta - <zeta,psi_j> psi_j)
// with theta_j == 1 for the uniform model.
inline std::vector<WaveField> coupling_rhs(const EnsembleState& s, const ModelParams& p) {
  WaveField zeta = order_parameter(s);
  std::size_t n = s.size();
  std::vector<WaveField> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const WaveField& psi = s.fields[j];
    Complex zp = inner_product(zeta, psi);
    double theta = s.theta.values[j];
    Complex coef;
    if (p.kind == ModelKind::Model2) {
      coef = zp;
    } else {
      double mass = norm(psi);
      if (mass < kEpsMass)
        throw VanishingMassError("coupling: oscillator " + std::to_string(j) +
                                 " below the mass floor at t=" + std::to_string(s.time));
      coef = zp / (mass * mass);
    }
    WaveField inc = WaveField::zero(psi.grid);
    double half_k = 0.5 * p.k;
    for (std::size_t i = 0; i < inc.values.size(); ++i)
      inc.values[i] = half_k * (theta * zeta.values[i] - coef * psi.values[i]);
    out.push_back(std::move(inc));
  }
  return out;
}

// Analytic d/dt ||psi_j||^2, used as a runtime identity check against
// 2 Re<psi_j, coupling_rhs_j>.
inline std::vector<double> mass_rhs_check(const EnsembleState& s, const ModelParams& p) {
  WaveField zeta = order_parameter(s);
  std::vector<double> out(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    double re = inner_product(zeta, s.fields[j]).real();
    double theta = s.theta.values[j];
    if (p.kind == ModelKind::Model2) {
      double m = norm(s.fields[j]);
      out[j] = p.k * re * (theta - m * m);
    } else {
      out[j] = p.k * re * (theta - 1.0);
    }
  }
  return out;
}

namespace detail {

inline std::vector<Center> centers_of(const EnsembleState& s) {
  std::vector<Center> c(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    std::vector<double> x = center_of_mass(s.fields[j]);
    c[j] = Center{x[0], x.size() > 1 ? x[1] : 0.0};
  }
  return c;
}

struct Increment {
  std::vector<WaveField> dpsi;
  std::vector<double> dtheta;
};

inline Increment joint_rhs(const EnsembleState& s, const ModelParams& p) {
  Increment inc;
  inc.dpsi = coupling_rhs(s, p);
  if (p.mu > 0.0) {
    inc.dtheta = theta_rhs(s.theta, centers_of(s), p.kernel, p.mu);
  } else {
    inc.dtheta.assign(s.size(), 0.0);
  }
  return inc;
}

inline EnsembleState state_axpy(const EnsembleState& base, const Increment& inc, double a) {
  EnsembleState out = base;
  for (std::size_t j = 0; j < out.size(); ++j) {
    for (std::size_t i = 0; i < out.fields[j].values.size(); ++i)
      out.fields[j].values[i] += a * inc.dpsi[j].values[i];
    out.theta.values[j] += a * inc.dtheta[j];
  }
  return out;
}

inline void accumulate(Increment& acc, const Increment& inc, double w) {
  for (std::size_t j = 0; j < acc.dpsi.size(); ++j) {
    for (std::size_t i = 0; i < acc.dpsi[j].values.size(); ++i)
      acc.dpsi[j].values[i] += w * inc.dpsi[j].values[i];
    acc.dtheta[j] += w * inc.dtheta[j];
  }
}

// One classical RK4 step of the joint coupling + theta system.
inline void rk4_joint(EnsembleState& s, const ModelParams& p, double dt) {
  Increment k1 = joint_rhs(s, p);
  Increment k2 = joint_rhs(state_axpy(s, k1, 0.5 * dt), p);
  Increment k3 = joint_rhs(state_axpy(s, k2, 0.5 * dt), p);
  Increment k4 = joint_rhs(state_axpy(s, k3, dt), p);
  accumulate(k1, k2, 2.0);
  accumulate(k1, k3, 2.0);
  accumulate(k1, k4, 1.0);
  s = state_axpy(s, k1, dt / 6.0);
}

// Exact flow of H_j = -(1/2)Laplacian + V + Omega_j over half_dt, realized as
// potential/kinetic/potential Strang inside the half-step. For V = 0 the
// composition is exact.
inline void hamiltonian_half(EnsembleState& s, const ModelParams& p, double half_dt) {
  parallel_for(s.size(), [&](std::size_t j) {
    WaveField f = potential_phase(s.fields[j], p.potential, p.omega(j), 0.5 * half_dt);
    f = kinetic_phase(f, half_dt);
    s.fields[j] = potential_phase(f, p.potential, p.omega(j), 0.5 * half_dt);
  });
}

inline void check_finite(const EnsembleState& s, double t) {
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!field_finite(s.fields[j]) || !std::isfinite(s.theta.values[j]))
      throw NumericalInstabilityError("non-finite values in oscillator " +
                                      std::to_string(j) + " at t=" + std::to_string(t));
  }
}

// H psi computed spectrally, for the method-of-lines integrator.
inline WaveField hamiltonian_apply(const WaveField& f, const PotentialSpec& pot,
                                   double omega_shift) {
  const GridSpec& g = f.grid;
  int n = g.points_per_dim;
  WaveField out = f;
  fft_grid(out.values, g, false);
  if (g.dim == 1) {
    for (int k = 0; k < n; ++k) {
      double xi = wavenumber(k, n, g.half_width);
      out.values[k] *= 0.5 * xi * xi;
    }
  } else {
    for (int k0 = 0; k0 < n; ++k0)
      for (int k1 = 0; k1 < n; ++k1) {
        double xi0 = wavenumber(k0, n, g.half_width);
        double xi1 = wavenumber(k1, n, g.half_width);
        out.values[static_cast<std::size_t>(k0) * n + k1] *= 0.5 * (xi0 * xi0 + xi1 * xi1);
      }
  }
  fft_grid(out.values, g, true);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] += (pot.value_at(g, i) + omega_shift) * f.values[i];
  return out;
}

inline Increment full_rhs(const EnsembleState& s, const ModelParams& p) {
  Increment inc = joint_rhs(s, p);
  const Complex mi(0.0, -1.0);
  parallel_for(s.size(), [&](std::size_t j) {
    WaveField h = hamiltonian_apply(s.fields[j], p.potential, p.omega(j));
    for (std::size_t i = 0; i < h.values.size(); ++i)
      inc.dpsi[j].values[i] += mi * h.values[i];
  });
  return inc;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Integrators

inline EnsembleState step(const EnsembleState& state, const ModelParams& p) {
  EnsembleState s = state;
  detail::hamiltonian_half(s, p, 0.5 * p.dt);
  detail::rk4_joint(s, p, p.dt);
  detail::hamiltonian_half(s, p, 0.5 * p.dt);
  s.time = state.time + p.dt;
  detail::check_finite(s, s.time);
  return s;
}

inline EnsembleState oracle_step(const EnsembleState& state, const ModelParams& p) {
  EnsembleState s = state;
  detail::Increment k1 = detail::full_rhs(s, p);
  detail::Increment k2 = detail::full_rhs(detail::state_axpy(s, k1, 0.5 * p.dt), p);
  detail::Increment k3 = detail::full_rhs(detail::state_axpy(s, k2, 0.5 * p.dt), p);
  detail::Increment k4 = detail::full_rhs(detail::state_axpy(s, k3, p.dt), p);
  detail::accumulate(k1, k2, 2.0);
  detail::accumulate(k1, k3, 2.0);
  detail::accumulate(k1, k4, 1.0);
  s = detail::state_axpy(s, k1, p.dt / 6.0);
  s.time = state.time + p.dt;
  detail::check_finite(s, s.time);
  return s;
}

// ---------------------------------------------------------------------------
// Preflight

struct PreflightItem {
  std::string name;
  bool pass = true;
  double value = 0.0;
  std::string detail;
};

struct PreflightReport {
  std::vector<PreflightItem> items;
  bool all_pass = true;

  void add(std::string name, bool pass, double value, std::string detail = "") {
    all_pass = all_pass && pass;
    items.push_back({std::move(name), pass, value, std::move(detail)});
  }
};

// Evaluates the sufficient conditions for global existence plus the theta
// normalization. Failures are warnings (the conditions are sufficient, not
// necessary); only theta_j <= 0 aborts, which validate_state already rejects.
inline PreflightReport preflight(const EnsembleState& s, const ModelParams& p) {
  validate_state(s, p);
  PreflightReport rep;

  double mean = 0.0;
  for (double t : s.theta.values) mean += t;
  mean /= static_cast<double>(s.size());
  rep.add("theta_mean_one", std::abs(mean - 1.0) <= 1e-12, mean,
          "mean of theta must be 1 (rescale at build time if needed)");

  std::vector<double> masses(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) masses[j] = norm(s.fields[j]);

  if (p.kind == ModelKind::Model1) {
    double lam_minus = masses[0], lam_plus = masses[0];
    for (double m : masses) {
      lam_minus = std::min(lam_minus, m);
      lam_plus = std::max(lam_plus, m);
    }
    double theta_plus = s.theta.values[0];
    for (double t : s.theta.values) theta_plus = std::max(theta_plus, t);
    double alpha = p.mu * p.kernel.infimum();  // alignment rate
    if (alpha > 0.0) {
      double ex = (theta_plus - 1.0);
      double value = lam_minus -
                     0.5 * p.k * (lam_plus / alpha) * ex * std::exp(0.5 * p.k / alpha * ex);
      rep.add("global_existence_lower_bound", value > 0.0, value,
              "initial lower bound on the smallest mass must stay positive");
    } else if (std::abs(theta_plus - 1.0) <= 1e-15) {
      rep.add("global_existence_lower_bound", lam_minus > 0.0, lam_minus,
              "all theta equal 1: bound reduces to the smallest initial mass");
    } else {
      rep.add("global_existence_lower_bound", false, 0.0,
              "not determinable a priori: kernel infimum is zero or mu = 0");
    }
  }

  if (p.kind == ModelKind::Model2) {
    ObservableFrame fr = frame(s);
    rep.add("wedge_condition", fr.min_corr >= 0.0, fr.min_corr,
            "all initial pairwise correlations nonnegative");
    double worst = 0.0;
    bool below = true;
    for (std::size_t j = 0; j < s.size(); ++j) {
      double excess = masses[j] * masses[j] - s.theta.values[j];
      worst = std::max(worst, excess);
      below = below && excess <= 0.0;
    }
    rep.add("mass_below_target", below, worst,
            "every ||psi_j||^2 at most theta_j (largest excess reported)");
    bool either = rep.items[rep.items.size() - 2].pass || below;
    rep.add("global_existence_either", either, either ? 1.0 : 0.0,
            "wedge or mass condition suffices for global existence");
  }

  double bmax = 0.0;
  for (const WaveField& f : s.fields) bmax = std::max(bmax, boundary_amplitude(f));
  rep.add("boundary_amplitude", bmax < 1e-8, bmax,
          "periodic truncation adequate while |psi| < 1e-8 on the box edge");
  return rep;
}

// ---------------------------------------------------------------------------
// Trajectory driver

struct RunResult {
  std::vector<ObservableFrame> frames;
  EnsembleState final_state;
  PreflightReport preflight;
  std::string error;          // nonempty if the run aborted; frames are kept
  double boundary_max = 0.0;  // largest boundary amplitude over sampled frames
  long long steps_taken = 0;
};

inline RunResult run(const EnsembleState& initial, const ModelParams& p,
                     long long sample_every) {
  if (sample_every < 1) throw ConfigError("run: sample_every must be >= 1");
  RunResult res;
  res.preflight = preflight(initial, p);
  EnsembleState s = initial;
  double t0 = initial.time;
  long long steps = std::llround(p.t_final / p.dt);
  if (steps < 1) steps = 1;
  auto sample = [&](const EnsembleState& st) {
    ObservableFrame fr = frame(st);
    for (const WaveField& f : st.fields)
      res.boundary_max = std::max(res.boundary_max, boundary_amplitude(f));
    res.frames.push_back(std::move(fr));
  };
  try {
    sample(s);
    for (long long i = 1; i <= steps; ++i) {
      s = step(s, p);
      s.time = t0 + static_cast<double>(i) * p.dt;
      res.steps_taken = i;
      if (i % sample_every == 0 || i == steps) sample(s);
    }
  } catch (const Error& e) {
    res.error = e.what();
  }
  res.final_state = std::move(s);
  return res;
}

}  // namespace qsync
