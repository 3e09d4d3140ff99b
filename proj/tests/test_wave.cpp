#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sac/numerics.hpp"
#include "sac/wave.hpp"

using namespace sac;

namespace {

const double kC0Cubic = 3.0 / std::sqrt(2.0);  // closed-form (a+-a-)/∫sqrt(2F)

// coarse independent phase-plane shooter used as the speed oracle
double shoot_speed_oracle(const Bistable& f, double delta) {
  auto fe = shift_nonlinearity(f, delta);
  auto verdict = [&](double c) {
    const double fp = f.fprime(fe.a_minus_eps);
    const double sp = 0.5 * (-c + std::sqrt(c * c - 4.0 * fp));
    const double e0 = 1e-9;
    double m = fe.a_minus_eps + e0, v = sp * e0;
    const double dz = 5e-3;
    auto a = [&](double mm, double vv) { return -c * vv - (f.f(mm) + delta); };
    for (int i = 0; i < 40000; ++i) {
      const double k1m = v, k1v = a(m, v);
      const double k2m = v + 0.5 * dz * k1v, k2v = a(m + 0.5 * dz * k1m, v + 0.5 * dz * k1v);
      const double k3m = v + 0.5 * dz * k2v, k3v = a(m + 0.5 * dz * k2m, v + 0.5 * dz * k2v);
      const double k4m = v + dz * k3v, k4v = a(m + dz * k3m, v + dz * k3v);
      m += dz / 6.0 * (k1m + 2 * k2m + 2 * k3m + k4m);
      v += dz / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
      if (m > fe.a_plus_eps + 0.2) return +1;
      if (v <= 0.0) return -1;
    }
    return 0;
  };
  double lo = -3.0, hi = 3.0;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    const int s = verdict(mid);
    if (s == +1)
      lo = mid;
    else if (s == -1)
      hi = mid;
    else
      return mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("balanced cubic wave matches tanh(z/sqrt(2))") {
  const Bistable f = make_cubic();
  const auto w = solve_wave(f, 0.0);
  CHECK(std::abs(w.c) < 1e-8);
  CHECK(std::abs(w.eval_m(0.0) - 0.0) < 1e-10);

  double sup_m = 0.0, sup_mz = 0.0;
  for (std::size_t i = 0; i < w.z.size(); ++i) {
    const double exact = std::tanh(w.z[i] / std::sqrt(2.0));
    sup_m = std::max(sup_m, std::abs(w.m[i] - exact));
    sup_mz = std::max(sup_mz, std::abs(w.mz[i] - (1.0 - exact * exact) / std::sqrt(2.0)));
  }
  CHECK(sup_m < 1e-6);
  CHECK(sup_mz < 1e-6);

  // strict monotonicity and residual of the profile ODE on the grid
  double res = 0.0;
  for (std::size_t i = 1; i + 1 < w.z.size(); ++i) {
    CHECK(w.mz[i] > 0.0);
    const double lap = (w.m[i + 1] - 2.0 * w.m[i] + w.m[i - 1]) / (w.dz * w.dz);
    const double der = (w.m[i + 1] - w.m[i - 1]) / (2.0 * w.dz);
    res = std::max(res, std::abs(lap + w.c * der + f.f(w.m[i])));
  }
  CHECK(res < 1e-6);

  // tail decay rate
  CHECK(w.lambda_fit == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));

  // boundary mismatch of the auto-enlarged domain
  CHECK(std::abs(w.m.front() + 1.0) < 1e-8);
  CHECK(std::abs(w.m.back() - 1.0) < 1e-8);
}

TEST_CASE("translation gauge: doubled domain changes m by <= 1e-7") {
  const Bistable f = make_cubic();
  const auto w1 = solve_wave(f, 0.0);
  const auto w2 = solve_wave(f, 0.0, 2.0 * w1.z_half);
  double gap = 0.0;
  for (double z = -w1.z_half; z <= w1.z_half; z += 0.37)
    gap = std::max(gap, std::abs(w1.eval_m(z) - w2.eval_m(z)));
  CHECK(gap < 1e-7);
}

TEST_CASE("forced wave speed against the oracle and c0") {
  const Bistable f = make_cubic();

  const auto w = solve_wave(f, 0.01);
  CHECK(w.c < 0.0);
  const double oracle = shoot_speed_oracle(f, 0.01);
  CHECK(w.c == doctest::Approx(oracle).epsilon(0.02));
  CHECK(w.c == doctest::Approx(-0.0212).epsilon(0.02));

  // m(0) pinning and monotonicity persist under forcing
  CHECK(std::abs(w.eval_m(0.0) - w.a_d) < 1e-10);

  const auto curve = wave_speed_curve(f, {-1e-3, 0.0, 1e-3});
  CHECK(std::abs(curve[1].second) < 1e-8);
  const double slope = (curve[2].second - curve[0].second) / 2e-3;
  CHECK(slope == doctest::Approx(-kC0Cubic).epsilon(0.01));
  // odd symmetry of the cubic
  CHECK(std::abs(curve[2].second + curve[0].second) < 1e-4);

  CHECK(c0(f) == doctest::Approx(kC0Cubic).epsilon(1e-6));
  // consistency: -d_delta c(0) from the solver matches the quadrature constant
  CHECK(-slope == doctest::Approx(c0(f)).epsilon(0.01));
}

TEST_CASE("equipartition of the balanced wave") {
  const Bistable f = make_cubic();
  const auto w = solve_wave(f, 0.0);
  double kinetic = 0.0;
  for (std::size_t i = 1; i < w.z.size(); ++i)
    kinetic += 0.5 * (w.mz[i] * w.mz[i] + w.mz[i - 1] * w.mz[i - 1]) * w.dz;
  const double exact = 2.0 * std::sqrt(2.0) / 3.0;
  CHECK(kinetic == doctest::Approx(exact).epsilon(1e-4));
}

TEST_CASE("delta-derivative of the profile stays bounded") {
  const Bistable f = make_cubic();
  const auto w0 = solve_wave(f, 0.0);
  const auto w1 = solve_wave(f, 1e-3);
  const auto w2 = solve_wave(f, 2e-3);
  double s1 = 0.0, s2 = 0.0;
  for (double z = -8.0; z <= 8.0; z += 0.05) {
    s1 = std::max(s1, std::abs(w1.eval_m(z) - w0.eval_m(z)));
    s2 = std::max(s2, std::abs(w2.eval_m(z) - w0.eval_m(z)));
  }
  CHECK(s1 / 1e-3 < 5.0);                              // |m_delta| <= C
  CHECK(s2 / s1 == doctest::Approx(2.0).epsilon(0.2));  // linear response in delta
}

TEST_CASE("speed interpolant c_of") {
  const Bistable f = make_cubic();
  const double d0 = delta0(f);
  CHECK(d0 == doctest::Approx(0.8 * 2.0 / (3.0 * std::sqrt(3.0))).epsilon(1e-3));

  const WaveSpeed c_of(f);
  CHECK(std::abs(c_of(0.0)) < 1e-8);
  CHECK(c_of(1e-3) == doctest::Approx(-2.121e-3).epsilon(0.02));
  // forcing -c(eps xi)/eps at eps = 0.01, xi = 2
  CHECK(c_of.forcing(0.01, 2.0) == doctest::Approx(4.243).epsilon(0.02));
  CHECK_THROWS_WITH_AS(c_of(d0 * 1.5), doctest::Contains("OutOfCalibratedRange"), Error);

  // spline endpoint behavior vs direct solves
  for (double d : {-0.8 * d0, -0.2 * d0, 0.13 * d0, 0.71 * d0}) {
    const double direct = solve_wave(f, d).c;
    CHECK(std::abs(c_of(d) - direct) < 1e-5);
  }
}

TEST_CASE("wave family interpolation in delta") {
  const Bistable f = make_cubic();
  const WaveFamily fam(f, 0.0, 13);
  const auto direct = solve_wave(f, 0.0123);
  double gap = 0.0;
  for (double z = -6.0; z <= 6.0; z += 0.1)
    gap = std::max(gap, std::abs(fam.m(z, 0.0123) - direct.eval_m(z)));
  CHECK(gap < 5e-5);
  CHECK(fam.mz(0.0, 0.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));
  CHECK(std::abs(fam.mdelta(0.0, 0.0)) < 5.0);
  CHECK_THROWS_AS(fam.m(0.0, fam.delta_max() * 1.1), Error);
}
