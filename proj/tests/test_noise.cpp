#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "sac/noise.hpp"
#include "sac/numerics.hpp"
#include "sac/rng.hpp"

using namespace sac;

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// asymptotic Kolmogorov-Smirnov p-value
double ks_pvalue(std::vector<double> sorted_z) {
  const auto n = static_cast<double>(sorted_z.size());
  std::sort(sorted_z.begin(), sorted_z.end());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted_z.size(); ++i) {
    const double F = normal_cdf(sorted_z[i]);
    d = std::max(d, std::abs(F - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - F));
  }
  const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k)
    p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return std::clamp(p, 0.0, 1.0);
}

BrownianPath synthetic_path(double t0, double dt, std::size_t n,
                            const std::function<double(double)>& f) {
  BrownianPath p;
  p.t0 = t0;
  p.dt = dt;
  p.seed = 0;
  p.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.w[i] = f(t0 + dt * static_cast<double>(i));
  return p;
}

}  // namespace

TEST_CASE("mollifier tables") {
  CHECK(mollifier::cdf(-1.0) == 0.0);
  CHECK(mollifier::cdf(1.0) == 1.0);
  CHECK(mollifier::cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mollifier::rho(0.0) == doctest::Approx(std::exp(-1.0) / 0.443993816168).epsilon(1e-9));
  CHECK(mollifier::rho(1.0) == 0.0);
  // symmetry
  for (double x : {0.12, 0.5, 0.83})
    CHECK(mollifier::cdf(-x) == doctest::Approx(1.0 - mollifier::cdf(x)).epsilon(1e-12));
}

TEST_CASE("brownian sampling: determinism, pinning, increments") {
  const auto a = BrownianPath::sample(0.5, 2.0, 1.0 / 64, 42);
  const auto b = BrownianPath::sample(0.5, 2.0, 1.0 / 64, 42);
  CHECK(a.w == b.w);  // bitwise determinism
  const auto c = BrownianPath::sample(0.5, 2.0, 1.0 / 64, 43);
  CHECK(a.w != c.w);
  CHECK(a(0.0) == 0.0);

  // variance of W(1) across seeds
  std::vector<double> w1;
  for (int s = 0; s < 10000; ++s) w1.push_back(BrownianPath::sample(0.0, 1.0, 1.0 / 16, 1000 + s)(1.0));
  CHECK(mean(w1) == doctest::Approx(0.0).scale(1.0).epsilon(0.05));
  CHECK(variance(w1) == doctest::Approx(1.0).epsilon(0.05));

  // KS test on 10^4 scaled increments of one path
  const auto path = BrownianPath::sample(0.0, 10.0, 1e-3, 7);
  std::vector<double> z;
  for (std::size_t i = 1; i <= 10000; ++i)
    z.push_back((path.w[i] - path.w[i - 1]) / std::sqrt(path.dt));
  CHECK(ks_pvalue(z) > 0.01);

  // negative branch is independent of the positive one
  std::vector<double> zn;
  for (std::size_t i = 1; i <= 100; ++i) zn.push_back(path.w[i]);
  CHECK(path.t_min() == 0.0);
  const auto two_sided = BrownianPath::sample(1.0, 1.0, 1e-2, 99);
  CHECK(two_sided.t_min() == doctest::Approx(-1.0));
  CHECK(two_sided(0.0) == 0.0);
}

TEST_CASE("mollification preserves affine paths and the modulus bound") {
  const double eps = 0.1, gamma2 = 0.5;
  const double s = std::pow(eps, gamma2);

  const auto lin = synthetic_path(-1.0, 1e-2, 401, [](double t) { return t; });
  const auto we_lin = mollify(lin, eps, gamma2, 2.0, 1e-2);
  for (std::size_t i = 0; i < we_lin.f.size(); ++i) {
    CHECK(we_lin.f[i] == doctest::Approx(we_lin.dt * static_cast<double>(i)).scale(1.0).epsilon(1e-10));
    CHECK(we_lin.d[i] == doctest::Approx(1.0).epsilon(1e-10));  // xi = 1 for W(t) = t
  }

  const auto zero = synthetic_path(-1.0, 1e-2, 401, [](double) { return 0.0; });
  const auto we_zero = mollify(zero, eps, gamma2, 2.0, 1e-2);
  for (double v : we_zero.f) CHECK(v == 0.0);

  // |W^e - W| bounded by the empirical modulus of continuity at scale s
  const auto w = BrownianPath::sample(1.0, 3.0, 1e-3, 11);
  const auto we = mollify(w, eps, gamma2, 2.0, 1e-3);
  double modulus = 0.0;
  const auto win = static_cast<std::size_t>(s / w.dt) + 1;
  for (std::size_t i = 0; i + win < w.w.size(); ++i)
    for (std::size_t j = i + 1; j <= i + win; ++j)
      modulus = std::max(modulus, std::abs(w.w[j] - w.w[i]));
  double worst = 0.0;
  for (std::size_t i = 0; i < we.f.size(); ++i) {
    const double t = we.dt * static_cast<double>(i);
    worst = std::max(worst, std::abs(we.f[i] - w(t)));
  }
  CHECK(worst <= modulus * 1.2);

  // insufficient support
  CHECK_THROWS_WITH_AS(mollify(w, eps, gamma2, 3.5, 1e-3), doctest::Contains("InsufficientSupport"),
                       Error);
}

TEST_CASE("mn2 noise: derivative identities") {
  const double eps = 0.25, gamma2 = 0.5;

  // affine test path: xi = 1, xi_dot = 0
  const auto lin = synthetic_path(-1.0, 5e-3, 601, [](double t) { return t; });
  const auto noise_lin = mn2_noise(std::make_shared<BrownianPath>(lin), eps, gamma2, 1.0, 1e-3);
  for (double t : {0.0, 0.31, 0.62, 1.0}) {
    CHECK(noise_lin.xi(t) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(noise_lin.xi_dot(t) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  }

  // trapezoid integral of xi against the increment of the mollified path
  const double s = std::pow(eps, gamma2);
  const auto w = std::make_shared<BrownianPath>(BrownianPath::sample(1.0, 2.0, s / 64.0, 5));
  const double dt_s = 5e-6;
  const auto noise = mn2_noise(w, eps, gamma2, 1.0, dt_s);
  const auto we = mollify(*w, eps, gamma2, 1.0, dt_s);
  const auto& xs = noise.samples();
  double trap = 0.0;
  for (std::size_t i = 1; i < xs.f.size(); ++i) trap += 0.5 * (xs.f[i] + xs.f[i - 1]) * dt_s;
  CHECK(std::abs(trap - (we.f.back() - we.f.front())) < 1e-8);

  // Richardson: kernel-derivative xi vs centered differences of W^e at h, h/2
  const double h1 = 16 * dt_s, h2 = 8 * dt_s;
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i : {40000ul, 80000ul, 120000ul, 160000ul}) {
    const auto k1 = static_cast<std::size_t>(h1 / dt_s), k2 = static_cast<std::size_t>(h2 / dt_s);
    e1 = std::max(e1, std::abs((we.f[i + k1] - we.f[i - k1]) / (2 * h1) - xs.f[i]));
    e2 = std::max(e2, std::abs((we.f[i + k2] - we.f[i - k2]) / (2 * h2) - xs.f[i]));
  }
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));

  // determinism of the full pipeline
  const auto noise_b = mn2_noise(w, eps, gamma2, 1.0, dt_s);
  CHECK(noise.checksum() == noise_b.checksum());
  CHECK(noise.xi(0.377) == noise_b.xi(0.377));
}

TEST_CASE("mn1 noise: scaling identity and deterministic bounds") {
  const double eps = 0.01, gamma1 = 0.25;
  const double horizon = std::pow(eps, -2.0 * gamma1) * 0.3 + 1.0;

  const auto base = std::make_shared<StationaryBase>(
      StationaryBase::sample(1.0, 0.5, 1.0, 0.05, horizon, 21));
  const auto noise = mn1_noise(base, eps, gamma1, 0.3);

  // construction identity, bitwise
  for (double t : {0.0, 0.07, 0.13, 0.29}) {
    CHECK(noise.xi(t) == std::pow(eps, -gamma1) * base->xi(std::pow(eps, -2.0 * gamma1) * t));
    CHECK(noise.xi_dot(t) ==
          std::pow(eps, -3.0 * gamma1) * base->xi_dot(std::pow(eps, -2.0 * gamma1) * t));
  }

  // deterministic clipping bounds: sup|xi^e| <= M eps^{-1/4} ~ 3.162
  CHECK(noise.xi_bound() == doctest::Approx(3.1622776601683795).epsilon(1e-12));
  double sup_xi = 0.0, sup_xi_dot = 0.0;
  for (double t = 0.0; t <= 0.3; t += 1e-4) {
    sup_xi = std::max(sup_xi, std::abs(noise.xi(t)));
    sup_xi_dot = std::max(sup_xi_dot, std::abs(noise.xi_dot(t)));
  }
  CHECK(sup_xi <= noise.xi_bound() * (1.0 + 1e-12));
  CHECK(sup_xi_dot <= noise.xi_dot_bound() * (1.0 + 1e-12));

  // base path bounds and near-zero mean (effective sample count = T * rate)
  double sup_base = 0.0;
  for (double v : base->xi_series.f) sup_base = std::max(sup_base, std::abs(v));
  CHECK(sup_base <= base->clip_level);
  const double m = mean(base->xi_series.f);
  const double sd = std::sqrt(variance(base->xi_series.f));
  CHECK(std::abs(m) <= 3.0 * sd / std::sqrt(horizon * base->ou_rate));

  // degenerate base
  const auto dead = std::make_shared<StationaryBase>(
      StationaryBase::sample(1.0, 0.0, 1.0, 0.05, horizon, 22));
  const auto quiet = mn1_noise(dead, eps, gamma1, 0.3);
  CHECK(quiet.xi(0.1) == 0.0);

  // horizon guard
  CHECK_THROWS_WITH_AS(mn1_noise(base, 1e-4, gamma1, 0.3), doctest::Contains("InsufficientSupport"),
                       Error);
}

TEST_CASE("funaki toggle pins xi(0) to zero") {
  const double eps = 0.04, gamma2 = 0.5;
  const double s = std::pow(eps, gamma2);
  const auto w = std::make_shared<BrownianPath>(BrownianPath::sample(1.0, 1.0, s / 64.0, 17));
  auto noise = mn2_noise(w, eps, gamma2, 0.5);
  const double far = noise.xi(0.45);
  REQUIRE(noise.xi(0.0) != 0.0);
  noise.enable_zero_at_origin();
  CHECK(std::abs(noise.xi(0.0)) < 1e-14);
  CHECK(noise.xi(0.45) == far);  // cutoff is local
}

TEST_CASE("alpha0 of the OU surrogate") {
  StationaryBase proto;
  proto.ou_rate = 1.0;
  proto.stat_std = 0.2;
  proto.clip_level = 2.0;  // far outside the active range
  proto.mollifier_width = 0.05;
  proto.seed = 4242;

  // zero process
  StationaryBase dead = proto;
  dead.stat_std = 0.0;
  CHECK(alpha0(dead, 4, 4.0) == 0.0);

  // analytic OU: alpha0^2 = 2 Var / rate (clipping inactive)
  double se = 0.0;
  const double a6 = alpha0(proto, 120, 6.0, &se);
  CHECK(a6 * a6 == doctest::Approx(2.0 * 0.04).epsilon(0.15));
  CHECK(se > 0.0);
  CHECK(se < 0.1 * a6);

  // doubling the horizon moves the estimate by < 2%
  const double a12 = alpha0(proto, 120, 12.0);
  CHECK(std::abs(a12 - a6) / a6 < 0.02);
}
