#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "qsync/dynamics.hpp"
#include "qsync/observables.hpp"

using namespace qsync;
using Catch::Matchers::WithinAbs;
using testutil::Packet;

namespace {

const GridSpec kGrid = GridSpec::create(1, 256, 20.0);

EnsembleState make_state(const std::vector<Packet>& packets, std::vector<double> thetas) {
  EnsembleState s;
  for (const Packet& p : packets) s.fields.push_back(testutil::packet_field(kGrid, p));
  s.theta.values = std::move(thetas);
  return s;
}

}  // namespace

TEST_CASE("order parameter") {
  Packet pk{0.4, 0.1, 1.0, 0.7, 1.0};
  EnsembleState same = make_state({pk, pk, pk}, {1, 1, 1});
  WaveField zeta = order_parameter(same);
  double err = 0.0;
  for (std::size_t i = 0; i < zeta.values.size(); ++i)
    err = std::max(err, std::abs(zeta.values[i] - same.fields[0].values[i]));
  CHECK(err < 1e-14);

  EnsembleState anti = make_state({pk, pk}, {1, 1});
  for (auto& v : anti.fields[1].values) v = -v;
  CHECK(norm(order_parameter(anti)) < 1e-14);

  EnsembleState s = make_state({{-0.8, 0.3, 1.1, 0.0, 1.1},
                                {0.5, -0.2, 0.9, 1.2, 0.8},
                                {0.1, 0.4, 1.3, -0.7, 1.05}},
                               {1.25, 0.85, 0.9});
  WaveField z2 = order_parameter(s);
  for (std::size_t i = 0; i < z2.values.size(); i += 37) {
    Complex acc(0, 0);
    for (const auto& f : s.fields) acc += f.values[i];
    CHECK(std::abs(z2.values[i] - acc / 3.0) < 1e-15);
  }
}

TEST_CASE("frame invariants and examples") {
  Packet pk{0.2, 0.0, 1.0, 0.3, 1.0};
  EnsembleState same = make_state({pk, pk}, {1, 1});
  ObservableFrame fr = frame(same);
  CHECK_THAT(fr.corr_re[0][1], WithinAbs(1.0, 1e-12));
  CHECK_THAT(fr.corr_im[0][1], WithinAbs(0.0, 1e-12));
  CHECK_THAT(fr.min_corr, WithinAbs(1.0, 1e-12));

  // phi_2 = i phi_1: quarter rotation
  EnsembleState rot = make_state({pk, pk}, {1, 1});
  for (auto& v : rot.fields[1].values) v *= Complex(0, 1);
  fr = frame(rot);
  CHECK_THAT(fr.corr_re[0][1], WithinAbs(0.0, 1e-12));
  CHECK_THAT(std::abs(fr.corr_im[0][1]), WithinAbs(1.0, 1e-12));

  EnsembleState s = make_state({{-0.8, 0.3, 1.1, 0.0, 1.1},
                                {0.5, -0.2, 0.9, 1.2, 0.8},
                                {0.1, 0.4, 1.3, -0.7, 1.05},
                                {0.9, -0.6, 1.0, 0.4, 0.95}},
                               {1.25, 0.85, 0.9, 1.0});
  fr = frame(s);
  std::size_t n = s.size();
  double mean_mass = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    mean_mass += fr.masses[j];
    CHECK_THAT(fr.corr_re[j][j], WithinAbs(1.0, 1e-10));
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(fr.corr_re[j][k] == fr.corr_re[k][j]);
      CHECK(fr.corr_im[j][k] == -fr.corr_im[k][j]);
      double mod = std::hypot(fr.corr_re[j][k], fr.corr_im[j][k]);
      CHECK(mod <= 1.0 + 1e-10);
    }
  }
  mean_mass /= static_cast<double>(n);
  CHECK(fr.zeta_norm <= mean_mass + 1e-10);

  // ||zeta||^2 equals the bilinear expansion over the correlation matrix
  double expansion = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      expansion += fr.masses[j] * fr.masses[k] * fr.corr_re[j][k];
  expansion /= static_cast<double>(n * n);
  CHECK_THAT(fr.zeta_norm * fr.zeta_norm, WithinAbs(expansion, 1e-10));
}

TEST_CASE("zeta derivative identity: fixed points and sign") {
  Packet pk{0.1, 0.0, 1.0, 0.2, 1.0};
  EnsembleState sync = make_state({pk, pk, pk}, {1, 1, 1});
  ModelParams p;
  p.kind = ModelKind::Model1;
  p.k = 1.3;
  CHECK_THAT(zeta_derivative_identity(sync, p), WithinAbs(0.0, 1e-12));

  // mean-one theta keeps the derivative nonnegative in the normalized model
  EnsembleState s = make_state({{-0.8, 0.3, 1.1, 0.0, 1.1},
                                {0.5, -0.2, 0.9, 1.2, 0.8},
                                {0.1, 0.4, 1.3, -0.7, 1.05}},
                               {1.25, 0.85, 0.9});
  CHECK(zeta_derivative_identity(s, p) >= -1e-12);

  // unnormalized model with masses below their targets
  p.kind = ModelKind::Model2;
  EnsembleState s2 = make_state({{-0.5, 0.2, 1.0, 0.0, std::sqrt(0.6 * 1.2)},
                                 {0.4, -0.3, 1.1, 0.8, std::sqrt(0.7 * 0.8)},
                                 {0.8, 0.1, 0.9, -0.4, std::sqrt(0.5 * 1.0)}},
                                {1.2, 0.8, 1.0});
  CHECK(zeta_derivative_identity(s2, p) >= -1e-12);
}

TEST_CASE("zeta derivative identity matches finite differences of a run") {
  // This finite-difference harness is the arbiter of where the square sits in
  // the derivative formula; the mass-weighted variant with the square taken
  // OUTSIDE the real part fails it by orders of magnitude.
  for (ModelKind kind : {ModelKind::Model1, ModelKind::Model2}) {
    ModelParams p;
    p.kind = kind;
    p.k = 1.4;
    p.mu = 1.0;
    p.kernel = KernelSpec::heavy_tail(1.0);
    p.potential = PotentialSpec::harmonic(1.0);
    p.dt = 1e-3;
    p.t_final = 0.2;
    EnsembleState s = make_state({{-0.7, 0.2, 1.0, 0.0, 1.0},
                                  {0.4, -0.1, 1.1, 0.9, 0.85},
                                  {0.6, 0.3, 0.9, -0.6, 1.1}},
                                 {1.2, 0.95, 0.85});
    RunResult r = run(s, p, 1);
    REQUIRE(r.error.empty());

    // rebuild states at frame times to evaluate the analytic side
    EnsembleState st = s;
    std::vector<double> zn2, analytic, alt;
    zn2.push_back(r.frames[0].zeta_norm * r.frames[0].zeta_norm);
    auto alt_form = [&](const EnsembleState& state) {
      // square of the real part instead of the real part of the square
      WaveField zeta = order_parameter(state);
      double nz = norm(zeta);
      double thbar = 0.0;
      for (double t : state.theta.values) thbar += t;
      thbar /= 3.0;
      double sum = 0.0;
      for (std::size_t j = 0; j < 3; ++j) {
        double m = norm(state.fields[j]);
        double re = (inner_product(zeta, state.fields[j]) / m).real();
        double term = re * re;
        if (kind == ModelKind::Model2) term *= m * m;
        sum += term;
      }
      return p.k * (thbar * nz * nz - sum / 3.0);
    };
    analytic.push_back(zeta_derivative_identity(st, p));
    alt.push_back(alt_form(st));
    long long steps = std::llround(p.t_final / p.dt);
    for (long long i = 1; i <= steps; ++i) {
      st = step(st, p);
      double nz = norm(order_parameter(st));
      zn2.push_back(nz * nz);
      analytic.push_back(zeta_derivative_identity(st, p));
      alt.push_back(alt_form(st));
    }
    double max_res = 0.0, max_alt = 0.0;
    for (std::size_t i = 1; i + 1 < zn2.size(); ++i) {
      double fd = (zn2[i + 1] - zn2[i - 1]) / (2.0 * p.dt);
      max_res = std::max(max_res, std::abs(fd - analytic[i]));
      max_alt = std::max(max_alt, std::abs(fd - alt[i]));
    }
    CHECK(max_res < 1e-5);
    if (kind == ModelKind::Model2) {
      CHECK(max_alt > 100.0 * max_res);  // misplaced square is not the derivative
    }
  }
}

TEST_CASE("exponential rate fitting") {
  std::vector<std::pair<double, double>> series;
  for (int i = 0; i <= 200; ++i) {
    double t = 0.05 * i;
    series.emplace_back(t, std::exp(-2.0 * t));
  }
  RateFit fit = fit_exponential_rate(series, 0.0, 10.0);
  CHECK_THAT(fit.rate, WithinAbs(2.0, 1e-9));
  CHECK_THAT(fit.r_squared, WithinAbs(1.0, 1e-12));

  std::vector<std::pair<double, double>> flat;
  for (int i = 0; i <= 50; ++i) flat.emplace_back(0.1 * i, 3.7);
  fit = fit_exponential_rate(flat, 0.0, 5.0);
  CHECK(fit.rate == 0.0);
  CHECK(fit.r_squared == 0.0);

  std::vector<std::pair<double, double>> wobble;
  for (int i = 0; i <= 400; ++i) {
    double t = 0.025 * i;
    wobble.emplace_back(t, std::exp(-2.0 * t) * (1.0 + 0.01 * std::sin(t)));
  }
  fit = fit_exponential_rate(wobble, 0.0, 10.0);
  CHECK(std::abs(fit.rate - 2.0) < 0.02 * 2.0);

  // invariance under positive rescaling of y
  std::vector<std::pair<double, double>> scaled = wobble;
  for (auto& [t, y] : scaled) y *= 17.25;
  RateFit fit2 = fit_exponential_rate(scaled, 0.0, 10.0);
  CHECK_THAT(fit2.rate - fit.rate, WithinAbs(0.0, 1e-12));
  CHECK_THAT(fit2.intercept - fit.intercept, WithinAbs(std::log(17.25), 1e-12));

  std::vector<std::pair<double, double>> bad = {{0.0, 1.0}, {1.0, -0.5}, {2.0, 0.2}};
  CHECK_THROWS_AS(fit_exponential_rate(bad, 0.0, 2.0), DomainError);
  std::vector<std::pair<double, double>> few = {{0.0, 1.0}, {1.0, 0.5}};
  CHECK_THROWS_AS(fit_exponential_rate(few, 0.0, 1.0), DomainError);
}

TEST_CASE("regime detection") {
  std::vector<std::pair<double, Complex>> constant;
  for (int i = 0; i < 300; ++i) constant.emplace_back(0.05 * i, Complex(0.8, -0.1));
  RegimeResult r = detect_regime(constant, 0.5);
  CHECK(r.kind == RegimeResult::Kind::Converged);
  CHECK(std::abs(r.limit - Complex(0.8, -0.1)) < 1e-12);

  std::vector<std::pair<double, Complex>> circle;
  for (int i = 0; i <= 2000; ++i) {
    double t = 0.02 * i;
    circle.emplace_back(t, 0.5 * std::polar(1.0, t));
  }
  r = detect_regime(circle, 0.5);
  CHECK(r.kind == RegimeResult::Kind::Periodic);
  CHECK(std::abs(r.period_estimate - 2.0 * std::numbers::pi) <
        0.1 * 2.0 * std::numbers::pi);

  // accelerating rotation: recurrences exist but spacings drift
  std::vector<std::pair<double, Complex>> chirp;
  for (int i = 0; i <= 4000; ++i) {
    double t = 0.02 * i;
    chirp.emplace_back(t, 0.5 * std::polar(1.0, 0.12 * t * t));
  }
  r = detect_regime(chirp, 0.8);
  CHECK(r.kind == RegimeResult::Kind::Undetermined);

  std::vector<std::pair<double, Complex>> few(50, {0.0, Complex(0, 0)});
  CHECK_THROWS_AS(detect_regime(few, 0.5), DomainError);
}
