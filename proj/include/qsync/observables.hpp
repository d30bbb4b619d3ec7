#pragma once

// Diagnostics over ensemble states: order parameter zeta = (1/N) sum psi_j,
// the correlation matrix <phi_j, phi_k>, masses, centers, spreads; plus
// exponential-rate fitting and tail-regime detection over time series.

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qsync/state.hpp"

namespace qsync {

struct ObservableFrame {
  double time = 0.0;
  std::vector<double> masses;             // lambda_j
  std::vector<double> thetas;
  std::vector<Center> centers;            // x_j
  std::vector<std::vector<double>> corr_re;  // Re<phi_j, phi_k>
  std::vector<std::vector<double>> corr_im;  // Im<phi_j, phi_k>
  double zeta_norm = 0.0;
  double min_corr = 1.0;                  // min over j<k of corr_re
  double theta_spread = 0.0;
  double diameter = 0.0;                  // D(t)

  std::size_t size() const { return masses.size(); }
};

struct RateFit {
  double rate = 0.0;       // negated slope of the log-linear fit
  double intercept = 0.0;  // value of ln y at t = 0
  double r_squared = 0.0;
  double t_start = 0.0, t_end = 0.0;
  std::size_t samples = 0;
};

inline WaveField order_parameter(const EnsembleState& s) {
  WaveField z = WaveField::zero(s.grid());
  for (const WaveField& f : s.fields)
    for (std::size_t i = 0; i < z.values.size(); ++i) z.values[i] += f.values[i];
  double inv = 1.0 / static_cast<double>(s.size());
  for (Complex& v : z.values) v *= inv;
  return z;
}

inline ObservableFrame frame(const EnsembleState& s) {
  std::size_t n = s.size();
  ObservableFrame fr;
  fr.time = s.time;
  fr.masses.resize(n);
  fr.thetas = s.theta.values;
  fr.centers.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    fr.masses[j] = norm(s.fields[j]);
    if (fr.masses[j] < kEpsMass)
      throw VanishingMassError("frame: oscillator " + std::to_string(j) +
                               " below the mass floor");
    std::vector<double> c = center_of_mass(s.fields[j]);
    fr.centers[j] = Center{c[0], c.size() > 1 ? c[1] : 0.0};
  }
  fr.corr_re.assign(n, std::vector<double>(n, 0.0));
  fr.corr_im.assign(n, std::vector<double>(n, 0.0));
  fr.min_corr = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    fr.corr_re[j][j] = 1.0;
    for (std::size_t k = j + 1; k < n; ++k) {
      Complex c = inner_product(s.fields[j], s.fields[k]) / (fr.masses[j] * fr.masses[k]);
      fr.corr_re[j][k] = c.real();
      fr.corr_re[k][j] = c.real();
      fr.corr_im[j][k] = c.imag();
      fr.corr_im[k][j] = -c.imag();
      if (c.real() < fr.min_corr) fr.min_corr = c.real();
    }
  }
  fr.zeta_norm = norm(order_parameter(s));
  fr.theta_spread = theta_spread(s.theta);
  fr.diameter = pair_diameter(fr.centers);
  return fr;
}

// Analytic d/dt ||zeta||^2.
//
// Both variants follow from differentiating ||zeta||^2 along the coupling
// flow (the common Hamiltonian drops out by self-adjointness):
//   normalized model:    k ( thbar ||zeta||^2 - (1/N) sum_j Re[<zeta,phi_j>^2] )
//   unnormalized model:  k ( thbar ||zeta||^2 - (1/N) sum_j lambda_j^2 Re[<zeta,phi_j>^2] )
// i.e. the real part of the squared complex inner product, mass-weighted only
// in the unnormalized model. The finite-difference harness is the arbiter of
// this transcription (see tests).
inline double zeta_derivative_identity(const EnsembleState& s, const ModelParams& p) {
  WaveField zeta = order_parameter(s);
  double zn2 = 0.0;
  {
    double nz = norm(zeta);
    zn2 = nz * nz;
  }
  double thbar = 0.0;
  for (double t : s.theta.values) thbar += t;
  thbar /= static_cast<double>(s.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    double mass = norm(s.fields[j]);
    if (mass < kEpsMass)
      throw VanishingMassError("zeta derivative: oscillator below the mass floor");
    Complex zp = inner_product(zeta, s.fields[j]) / mass;  // <zeta, phi_j>
    double term = (zp * zp).real();
    if (p.kind == ModelKind::Model2) term *= mass * mass;
    sum += term;
  }
  return p.k * (thbar * zn2 - sum / static_cast<double>(s.size()));
}

// ---------------------------------------------------------------------------
// Rate fitting

// Least-squares line through (t, ln y) on the window [t0, t1]; rate is the
// negated slope. Constant series report rate 0 with r^2 = 0.
inline RateFit fit_exponential_rate(const std::vector<std::pair<double, double>>& series,
                                    double t0, double t1) {
  if (!(t0 < t1)) throw DomainError("rate fit: window must satisfy t_start < t_end");
  std::vector<std::pair<double, double>> pts;
  for (const auto& [t, y] : series) {
    if (t < t0 || t > t1) continue;
    if (!(y > 0.0))
      throw DomainError("rate fit: non-positive sample y=" + std::to_string(y) +
                        " at t=" + std::to_string(t) + " inside the window");
    pts.emplace_back(t, std::log(y));
  }
  if (pts.size() < 3)
    throw DomainError("rate fit: need at least 3 samples in the window, got " +
                      std::to_string(pts.size()));
  double n = static_cast<double>(pts.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (const auto& [t, ly] : pts) {
    st += t;
    sy += ly;
    stt += t * t;
    sty += t * ly;
  }
  double det = n * stt - st * st;
  double slope = (n * sty - st * sy) / det;
  double icpt = (sy - slope * st) / n;
  double ss_res = 0, ss_tot = 0, mean = sy / n;
  for (const auto& [t, ly] : pts) {
    double e = ly - (icpt + slope * t);
    ss_res += e * e;
    ss_tot += (ly - mean) * (ly - mean);
  }
  RateFit fit;
  fit.t_start = t0;
  fit.t_end = t1;
  fit.samples = pts.size();
  if (ss_tot <= 1e-24) {  // constant series
    fit.rate = 0.0;
    fit.intercept = mean;
    fit.r_squared = 0.0;
    return fit;
  }
  fit.rate = -slope;
  fit.intercept = icpt;
  fit.r_squared = 1.0 - ss_res / ss_tot;
  return fit;
}

// Last time in the series at which |y| is still above the floor; fitting past
// it would mix in solver noise. Returns t_default when never below.
inline double clip_time_above(const std::vector<std::pair<double, double>>& series,
                              double floor_value, double t_default) {
  double t_clip = t_default;
  for (const auto& [t, y] : series) {
    if (y <= floor_value) {
      t_clip = t;
      break;
    }
  }
  return t_clip;
}

// ---------------------------------------------------------------------------
// Regime detection

struct RegimeResult {
  enum class Kind { Converged, Periodic, Undetermined };
  Kind kind = Kind::Undetermined;
  Complex limit{0.0, 0.0};       // Converged
  double period_estimate = 0.0;  // Periodic
};

// Classify the tail of a complex series: Converged when the tail barely moves
// around its mean; Periodic when the tail revisits its starting value at least
// three times with consistent spacing (+-10%).
inline RegimeResult detect_regime(const std::vector<std::pair<double, Complex>>& series,
                                  double tail_fraction) {
  if (series.size() < 100)
    throw DomainError("detect_regime: need at least 100 samples, got " +
                      std::to_string(series.size()));
  if (!(tail_fraction > 0.0) || !(tail_fraction < 1.0))
    throw DomainError("detect_regime: tail_fraction must lie in (0,1)");
  std::size_t start = static_cast<std::size_t>(
      static_cast<double>(series.size()) * (1.0 - tail_fraction));
  if (series.size() - start < 10) start = series.size() - 10;

  Complex mean(0.0, 0.0);
  for (std::size_t i = start; i < series.size(); ++i) mean += series[i].second;
  mean /= static_cast<double>(series.size() - start);
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = start; i < series.size(); ++i) {
    double d = std::abs(series[i].second - mean);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  RegimeResult res;
  if (hi - lo < 1e-4) {
    res.kind = RegimeResult::Kind::Converged;
    res.limit = mean;
    return res;
  }

  // Recurrences of the first tail value in the complex plane.
  Complex z0 = series[start].second;
  double amp = 0.0;
  for (std::size_t i = start; i < series.size(); ++i)
    amp = std::max(amp, std::abs(series[i].second - z0));
  double thr = 0.05 * amp;
  std::vector<double> recur;
  bool armed = false;  // must leave the neighborhood of z0 before counting a return
  for (std::size_t i = start + 1; i + 1 < series.size(); ++i) {
    double d = std::abs(series[i].second - z0);
    if (d > 0.5 * amp) armed = true;
    if (!armed || d >= thr) continue;
    double dp = std::abs(series[i - 1].second - z0);
    double dn = std::abs(series[i + 1].second - z0);
    if (d <= dp && d <= dn) {
      recur.push_back(series[i].first);
      armed = false;
    }
  }
  if (recur.size() >= 3) {
    std::vector<double> gaps;
    double prev = series[start].first;
    for (double t : recur) {
      gaps.push_back(t - prev);
      prev = t;
    }
    double gmin = gaps.front(), gmax = gaps.front(), gsum = 0.0;
    for (double g : gaps) {
      gmin = std::min(gmin, g);
      gmax = std::max(gmax, g);
      gsum += g;
    }
    double gmean = gsum / static_cast<double>(gaps.size());
    if (gmax - gmin <= 0.2 * gmean) {  // consistent within +-10% of the mean
      res.kind = RegimeResult::Kind::Periodic;
      res.period_estimate = gmean;
      return res;
    }
  }
  return res;
}

}  // namespace qsync
