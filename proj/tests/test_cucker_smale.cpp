#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qsync/cucker_smale.hpp"
#include "qsync/observables.hpp"

using namespace qsync;
using Catch::Matchers::WithinAbs;

namespace {

// Plain RK4 on the theta ODE with frozen centers; exact enough at dt=1e-3 to
// probe conservation and rate properties.
std::vector<std::pair<double, ThetaState>> integrate_theta(
    ThetaState theta, const std::vector<Center>& centers, const KernelSpec& spec,
    double mu, double dt, double t_final) {
  std::vector<std::pair<double, ThetaState>> out;
  out.emplace_back(0.0, theta);
  long long steps = std::llround(t_final / dt);
  auto axpy = [](const ThetaState& s, const std::vector<double>& d, double a) {
    ThetaState o = s;
    for (std::size_t i = 0; i < o.values.size(); ++i) o.values[i] += a * d[i];
    return o;
  };
  for (long long i = 1; i <= steps; ++i) {
    auto k1 = theta_rhs(theta, centers, spec, mu);
    auto k2 = theta_rhs(axpy(theta, k1, 0.5 * dt), centers, spec, mu);
    auto k3 = theta_rhs(axpy(theta, k2, 0.5 * dt), centers, spec, mu);
    auto k4 = theta_rhs(axpy(theta, k3, dt), centers, spec, mu);
    for (std::size_t j = 0; j < theta.values.size(); ++j)
      theta.values[j] += dt / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    out.emplace_back(i * dt, theta);
  }
  return out;
}

}  // namespace

TEST_CASE("kernel families") {
  CHECK(kernel_eval(KernelSpec::constant(2.0), 0.0) == 2.0);
  CHECK(kernel_eval(KernelSpec::constant(2.0), 17.3) == 2.0);

  KernelSpec ht = KernelSpec::heavy_tail(1.0);
  CHECK_THAT(kernel_eval(ht, 0.0), WithinAbs(1.0, 1e-15));
  CHECK_THAT(kernel_eval(ht, std::sqrt(3.0)), WithinAbs(0.5, 1e-15));
  CHECK(ht.infimum() == 0.0);

  KernelSpec abs_k = KernelSpec::absolute(0.5, 0.5, 1.0);
  CHECK_THAT(kernel_eval(abs_k, 0.0), WithinAbs(1.0, 1e-15));
  CHECK(kernel_eval(abs_k, 100.0) > 0.5);
  CHECK(abs_k.infimum() == 0.5);

  KernelSpec tab = KernelSpec::tabulated({0.0, 1.0, 2.0}, {3.0, 1.0, 0.5});
  CHECK_THAT(kernel_eval(tab, 0.5), WithinAbs(2.0, 1e-15));
  CHECK(kernel_eval(tab, 10.0) == 0.5);  // constant extrapolation
  CHECK(kernel_eval(tab, 0.0) == 3.0);
  CHECK(tab.infimum() == 0.5);

  CHECK_THROWS_AS(kernel_eval(ht, -0.1), DomainError);
  CHECK_THROWS_AS(KernelSpec::heavy_tail(1.5), DomainError);  // tail no longer heavy
  CHECK_THROWS_AS(KernelSpec::constant(0.0), DomainError);
  CHECK_THROWS_AS(KernelSpec::tabulated({1.0, 0.5}, {1.0, 1.0}), DomainError);
}

TEST_CASE("theta rhs") {
  KernelSpec ht = KernelSpec::heavy_tail(1.0);

  ThetaState equal{{1.0, 1.0, 1.0}};
  std::vector<Center> centers{{0, 0}, {1, 0}, {2, 0}};
  for (double d : theta_rhs(equal, centers, ht, 2.0)) CHECK(d == 0.0);

  // two oscillators, constant kernel: exact linear relaxation at rate mu*c
  double mu = 0.7, c = 1.3, a = 0.25;
  ThetaState two{{1.0 + a, 1.0 - a}};
  std::vector<Center> c2{{0, 0}, {0.5, 0}};
  auto d = theta_rhs(two, c2, KernelSpec::constant(c), mu);
  CHECK_THAT(d[0], WithinAbs(-mu * c * a, 1e-15));
  CHECK_THAT(d[1], WithinAbs(mu * c * a, 1e-15));

  // mu = 0 switches the protocol off
  for (double v : theta_rhs(two, c2, ht, 0.0)) CHECK(v == 0.0);

  CHECK_THROWS_AS(theta_rhs(two, centers, ht, 1.0), DomainError);
}

TEST_CASE("theta rhs matches an independent double loop") {
  std::mt19937_64 rng(17);
  int n = 6;
  ThetaState theta{std::vector<double>(n)};
  std::vector<Center> centers(n);
  for (int j = 0; j < n; ++j) {
    theta.values[j] = testutil::uniform(rng, 0.5, 1.5);
    centers[j] = {testutil::uniform(rng, -2, 2), testutil::uniform(rng, -2, 2)};
  }
  KernelSpec spec = KernelSpec::absolute(0.3, 0.9, 0.8);
  double mu = 1.7;
  auto got = theta_rhs(theta, centers, spec, mu);

  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      double dx = centers[j][0] - centers[k][0];
      double dy = centers[j][1] - centers[k][1];
      double h = spec.c_floor + spec.amp * std::pow(1.0 + dx * dx + dy * dy, -spec.gamma / 2);
      acc += h * (theta.values[k] - theta.values[j]);
    }
    double expected = mu / n * acc;
    CHECK_THAT(got[j], WithinAbs(expected, 1e-13));
    sum += got[j];
  }
  CHECK_THAT(sum, WithinAbs(0.0, 1e-12));  // symmetric kernel conserves the mean
}

TEST_CASE("spread and diameter") {
  CHECK(theta_spread(ThetaState{{1.0, 1.0, 1.0}}) == 0.0);
  CHECK_THAT(theta_spread(ThetaState{{1.2, 0.8}}), WithinAbs(0.2, 1e-15));

  CHECK(pair_diameter({{0.3, 0}}) == 0.0);
  CHECK_THAT(pair_diameter({{0, 0}, {3, 0}}), WithinAbs(3.0, 1e-15));

  std::mt19937_64 rng(29);
  std::vector<Center> pts(9);
  for (auto& p : pts) p = {testutil::uniform(rng, -4, 4), testutil::uniform(rng, -4, 4)};
  double brute = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      double dx = pts[i][0] - pts[j][0], dy = pts[i][1] - pts[j][1];
      brute = std::max(brute, std::hypot(dx, dy));
    }
  CHECK_THAT(pair_diameter(pts), WithinAbs(brute, 1e-15));
}

TEST_CASE("theta trajectories: conservation, contraction, max-min principle") {
  std::mt19937_64 rng(31);
  int n = 5;
  ThetaState theta{std::vector<double>(n)};
  double mean0 = 0.0;
  for (int j = 0; j < n; ++j) {
    theta.values[j] = testutil::uniform(rng, 0.4, 1.6);
    mean0 += theta.values[j];
  }
  mean0 /= n;
  std::vector<Center> centers(n);
  for (auto& c : centers) c = {testutil::uniform(rng, -2, 2), 0.0};

  auto traj = integrate_theta(theta, centers, KernelSpec::heavy_tail(0.7), 1.3, 1e-3, 4.0);
  double dt = 1e-3;
  double prev_spread = theta_spread(traj.front().second);
  double prev_min = *std::min_element(theta.values.begin(), theta.values.end());
  double prev_max = *std::max_element(theta.values.begin(), theta.values.end());
  for (const auto& [t, st] : traj) {
    double mean = 0.0;
    for (double v : st.values) mean += v;
    mean /= n;
    CHECK(std::abs(mean - mean0) < 1e-10);
    double spread = theta_spread(st);
    CHECK(spread <= prev_spread + 1e-8 * dt);
    prev_spread = spread;
    double mn = *std::min_element(st.values.begin(), st.values.end());
    double mx = *std::max_element(st.values.begin(), st.values.end());
    CHECK(mn >= prev_min - 1e-8 * dt);
    CHECK(mx <= prev_max + 1e-8 * dt);
    prev_min = mn;
    prev_max = mx;
  }
}

TEST_CASE("constant kernel pair relaxes at rate mu*c") {
  double mu = 0.8, c = 1.25;
  ThetaState theta{{1.3, 0.7}};
  std::vector<Center> centers{{0, 0}, {1, 0}};
  auto traj = integrate_theta(theta, centers, KernelSpec::constant(c), mu, 1e-3, 6.0);
  std::vector<std::pair<double, double>> series;
  for (const auto& [t, st] : traj) series.emplace_back(t, theta_spread(st));
  RateFit fit = fit_exponential_rate(series, 0.0, 6.0);
  CHECK(std::abs(fit.rate - mu * c) < 0.05 * mu * c);
  CHECK(fit.r_squared > 0.999);
}
