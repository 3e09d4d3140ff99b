#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "sac/field.hpp"
#include "sac/numerics.hpp"

using namespace sac;

namespace {

const double kPi = 3.14159265358979323846;

// extracted zero-level radius of a radially symmetric field, linear interp
double radial_zero_radius(const FieldRadial& f, double level) {
  for (int i = 1; i < f.nr; ++i) {
    if ((f.u[i - 1] - level) * (f.u[i] - level) <= 0.0 && f.u[i] != f.u[i - 1]) {
      const double frac = (level - f.u[i - 1]) / (f.u[i] - f.u[i - 1]);
      return f.h() * (i - 1 + frac);
    }
  }
  return -1.0;
}

double circle_radius_2d(const Field2D& f, Vec2 c, double level) {
  // average crossing radius along rays through the center
  std::vector<double> radii;
  for (int k = 0; k < 16; ++k) {
    const double th = 2.0 * kPi * k / 16;
    double prev = f.sample(c.x, c.y) - level;
    for (double r = f.grid.h; r < 0.49; r += 0.5 * f.grid.h) {
      const double val = f.sample(c.x + r * std::cos(th), c.y + r * std::sin(th)) - level;
      if (prev * val <= 0.0 && val != prev) {
        radii.push_back(r - 0.5 * f.grid.h * val / (val - prev));
        break;
      }
      prev = val;
    }
  }
  return mean(radii);
}

}  // namespace

TEST_CASE("mirror-Neumann Laplacian") {
  const auto g = Grid2D::unit_square(64);

  auto c = ic_constant(g, 0.7);
  const auto lc = laplacian_neumann(c);
  for (double v : lc.u) CHECK(v == 0.0);

  // exact on quadratics away from the boundary
  Field2D q;
  q.grid = g;
  q.u.resize(g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) q.at(i, j) = g.x(i) * g.x(i);
  const auto lq = laplacian_neumann(q);
  for (int j = 2; j < g.ny - 2; ++j)
    for (int i = 2; i < g.nx - 2; ++i)
      CHECK(lq.at(i, j) == doctest::Approx(2.0).epsilon(1e-10));

  // discrete eigenfunction: cos(pi x / L) with the mirror closure
  Field2D e;
  e.grid = g;
  e.u.resize(g.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) e.at(i, j) = std::cos(kPi * g.x(i));
  const auto le = laplacian_neumann(e);
  const double lambda_exact = 2.0 * (std::cos(kPi * g.h) - 1.0) / (g.h * g.h);
  double rayleigh_num = 0.0, rayleigh_den = 0.0;
  for (std::size_t k = 0; k < e.u.size(); ++k) {
    rayleigh_num += e.u[k] * le.u[k];
    rayleigh_den += e.u[k] * e.u[k];
  }
  const double rayleigh = rayleigh_num / rayleigh_den;
  CHECK(rayleigh == doctest::Approx(lambda_exact).epsilon(1e-9));
  CHECK(rayleigh == doctest::Approx(-kPi * kPi).epsilon(2.0 * g.h * g.h));
}

TEST_CASE("uniform fields follow the reaction clock") {
  const Bistable f = make_cubic();
  const auto g = Grid2D::unit_square(16);

  SimConfig cfg;
  cfg.eps = 0.1;
  cfg.f = &f;
  cfg.t_end = 0.0;

  // stable and unstable equilibria are exact fixed points
  for (double a : {1.0, 0.0, -1.0}) {
    auto state = ic_constant(g, a);
    cfg.dt = SimConfig::admissible_dt(g.h, cfg.eps, f);
    for (int s = 0; s < 50; ++s) step_ac(state, cfg);
    for (double v : state.u) CHECK(v == a);
  }

  // uniform dynamics match the reaction ODE in tau = t / eps^2
  auto state = ic_constant(g, 0.01);
  cfg.dt = 2e-7;
  const double t_end = 0.02;
  const long n = std::lround(t_end / cfg.dt);
  for (long s = 0; s < n; ++s) step_ac(state, cfg);
  const auto fe = shift_nonlinearity(f, 0.0);
  const double oracle = solve_reaction_ode(fe, 0.0, 0.01, t_end / (cfg.eps * cfg.eps), 1e-5).back();
  CHECK(state.u[0] == doctest::Approx(oracle).epsilon(1e-4));
}

TEST_CASE("uniform noise shifts the 0-D dynamics exactly") {
  const Bistable f = make_cubic();
  const double eps = 0.1, gamma2 = 0.5;
  const double s = std::pow(eps, gamma2);
  const auto w = std::make_shared<BrownianPath>(BrownianPath::sample(1.0, 1.0, s / 64.0, 3));
  const auto noise = mn2_noise(w, eps, gamma2, 0.05);

  const auto g = Grid2D::unit_square(16);
  SimConfig cfg;
  cfg.eps = eps;
  cfg.f = &f;
  cfg.noise = &noise;
  cfg.dt = 2e-7;
  auto state = ic_constant(g, 0.3);
  const double t_end = 0.01;
  const long n = std::lround(t_end / cfg.dt);
  for (long i = 0; i < n; ++i) step_ac(state, cfg);

  // high-order 0-D integration of u' = f(u)/eps^2 + xi/eps (RK4, same noise)
  double y = 0.3;
  const double dt = 2e-7;
  auto rhs = [&](double t, double u) {
    return f.f(u) / (eps * eps) + noise.xi(t) / eps;
  };
  for (long i = 0; i < n; ++i) {
    const double t = i * dt;
    const double k1 = rhs(t, y);
    const double k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1);
    const double k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2);
    const double k4 = rhs(t + dt, y + dt * k3);
    y += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  for (double v : state.u) CHECK(std::abs(v - y) < 1e-6);
}

TEST_CASE("maximum and comparison principles") {
  const Bistable f = make_cubic();
  const auto g = Grid2D::unit_square(48);
  SimConfig cfg;
  cfg.eps = 0.08;
  cfg.f = &f;
  cfg.dt = SimConfig::admissible_dt(g.h, cfg.eps, f);

  auto u = ic_circle(g, f, {0.5, 0.5}, 0.3, 0.1);
  auto v = u;
  for (double& val : v.u) val = std::min(1.0, val + 0.05);
  const int n_steps = 2000;
  for (int s = 0; s < n_steps; ++s) {
    step_ac(u, cfg);
    step_ac(v, cfg);
  }
  double umin = 1e300, umax = -1e300, worst_gap = -1e300;
  for (std::size_t k = 0; k < u.u.size(); ++k) {
    umin = std::min(umin, u.u[k]);
    umax = std::max(umax, u.u[k]);
    worst_gap = std::max(worst_gap, u.u[k] - v.u[k]);
  }
  CHECK(umin >= -1.0 - 1e-12);  // invariant range
  CHECK(umax <= 1.0 + 1e-12);
  CHECK(worst_gap <= 1e-10);  // ordering is preserved
}

TEST_CASE("deterministic circle shrinks by curvature") {
  const Bistable f = make_cubic();
  const auto g = Grid2D::unit_square(128);
  SimConfig cfg;
  cfg.eps = 0.02;
  cfg.f = &f;
  cfg.t_end = 0.02;
  cfg.snapshot_times = {0.01, 0.02};

  const auto traj = run_simulation(cfg, ic_circle(g, f, {0.5, 0.5}, 0.3, 0.1));
  REQUIRE(traj.snapshots.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    const double t = cfg.snapshot_times[k];
    const double expected = std::sqrt(0.09 - 2.0 * t);
    const double measured = circle_radius_2d(traj.snapshots[k], {0.5, 0.5}, f.a_unstable);
    CHECK(std::abs(measured - expected) < 3.0 * cfg.eps + 2.0 * g.h);
  }

  // determinism: identical rerun
  const auto traj2 = run_simulation(cfg, ic_circle(g, f, {0.5, 0.5}, 0.3, 0.1));
  CHECK(traj.snapshots[1].u == traj2.snapshots[1].u);

  // t_end = 0: single snapshot equal to the initial field
  SimConfig cfg0 = cfg;
  cfg0.t_end = 0.0;
  cfg0.snapshot_times = {0.0};
  const auto trivial = run_simulation(cfg0, ic_circle(g, f, {0.5, 0.5}, 0.3, 0.1));
  CHECK(trivial.snapshots.size() == 1);
  CHECK(trivial.snapshots[0].u == ic_circle(g, f, {0.5, 0.5}, 0.3, 0.1).u);
}

TEST_CASE("radial solver") {
  const Bistable f = make_cubic();
  SimConfig cfg;
  cfg.eps = 0.01;
  cfg.f = &f;

  // equilibrium fixed point
  FieldRadial flat;
  flat.nr = 64;
  flat.r_max = 0.5;
  flat.u.assign(64, 1.0);
  cfg.dt = SimConfig::admissible_dt(flat.h(), cfg.eps, f);
  for (int s = 0; s < 100; ++s) step_ac_radial(flat, cfg);
  for (double v : flat.u) CHECK(v == 1.0);

  // shrinking circle against the closed form
  cfg.dt = 0.0;
  cfg.t_end = 0.05;
  cfg.snapshot_times = {0.05};
  const auto traj = run_simulation_radial(cfg, ic_circle_radial(512, 0.6, f, 0.4, 0.1));
  const double measured = radial_zero_radius(traj.snapshots.back(), f.a_unstable);
  CHECK(std::abs(measured - std::sqrt(0.06)) < 3.0 * cfg.eps);
}

TEST_CASE("radial and 2-D solvers agree on the shrink curve") {
  const Bistable f = make_cubic();
  const double eps = 0.04;
  const auto g = Grid2D::unit_square(128);

  SimConfig cfg;
  cfg.eps = eps;
  cfg.f = &f;
  cfg.t_end = 0.02;
  cfg.snapshot_times = {0.005, 0.01, 0.015, 0.02};
  const auto t2d = run_simulation(cfg, ic_circle(g, f, {0.5, 0.5}, 0.3, 0.1));

  SimConfig cfgr = cfg;
  const auto t1d = run_simulation_radial(cfgr, ic_circle_radial(64, 0.5, f, 0.3, 0.1));

  for (std::size_t k = 0; k < cfg.snapshot_times.size(); ++k) {
    const double r2 = circle_radius_2d(t2d.snapshots[k], {0.5, 0.5}, f.a_unstable);
    const double r1 = radial_zero_radius(t1d.snapshots[k], f.a_unstable);
    CHECK(std::abs(r2 - r1) <= 2.0 * g.h + 2.0 * eps);
  }
}

TEST_CASE("convergence order against the planar wave profile") {
  const Bistable f = make_cubic();
  const double eps = 0.06;
  auto error_at = [&](int n) {
    const auto g = Grid2D::unit_square(n);
    SimConfig cfg;
    cfg.eps = eps;
    cfg.f = &f;
    cfg.dt = SimConfig::admissible_dt(1.0 / 127.0, eps, f) * (n == 128 ? 1.0 : 0.25);
    cfg.t_end = 0.002;
    // stationary planar profile tanh(x - 1/2 / (sqrt2 eps)); its residual is
    // pure discretization error, so the drift after a short run measures order
    Field2D u0;
    u0.grid = g;
    u0.u.resize(g.size());
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        u0.at(i, j) = std::tanh((g.x(i) - 0.5) / (std::sqrt(2.0) * eps));
    auto traj = run_simulation(cfg, u0);
    double err = 0.0;
    const auto& uf = traj.snapshots.back();
    for (int i = 0; i < g.nx; ++i)
      err = std::max(err,
                     std::abs(uf.at(i, g.ny / 2) -
                              std::tanh((g.x(i) - 0.5) / (std::sqrt(2.0) * eps))));
    return err;
  };
  const double e1 = error_at(128);
  const double e2 = error_at(255);  // h/2 with dt/4
  const double ratio = e1 / e2;
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("guards") {
  const Bistable f = make_cubic();
  const auto g = Grid2D::unit_square(16);
  SimConfig cfg;
  cfg.eps = 0.05;
  cfg.f = &f;

  // dt above the admissible cap is rejected by the runner
  cfg.dt = 1.0;
  cfg.t_end = 1.0;
  CHECK_THROWS_WITH_AS(run_simulation(cfg, ic_constant(g, 0.0)), doctest::Contains("BadConfig"),
                       Error);

  // an oversized manual step blows past the guard range
  auto state = ic_constant(g, 2.5);
  cfg.dt = 0.05;
  CHECK_THROWS_WITH_AS(step_ac(state, cfg), doctest::Contains("BlowUp"), Error);
}
