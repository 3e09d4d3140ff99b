#include "sac/field.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "sac/csv.hpp"

namespace sac {

Grid2D Grid2D::unit_square(int n) {
  if (n < 16) raise(errc::bad_config, "grid needs at least 16 nodes per side");
  Grid2D g;
  g.nx = g.ny = n;
  g.h = 1.0 / (n - 1);
  return g;
}

double Field2D::sample(double x, double y) const {
  const auto& g = grid;
  double sx = (x - g.x0) / g.h, sy = (y - g.y0) / g.h;
  sx = std::clamp(sx, 0.0, static_cast<double>(g.nx - 1));
  sy = std::clamp(sy, 0.0, static_cast<double>(g.ny - 1));
  int i = std::min(static_cast<int>(sx), g.nx - 2);
  int j = std::min(static_cast<int>(sy), g.ny - 2);
  const double fx = sx - i, fy = sy - j;
  return (1 - fx) * (1 - fy) * at(i, j) + fx * (1 - fy) * at(i + 1, j) +
         (1 - fx) * fy * at(i, j + 1) + fx * fy * at(i + 1, j + 1);
}

double FieldRadial::sample(double r) const {
  double s = r / h();
  s = std::clamp(s, 0.0, static_cast<double>(nr - 1));
  const int i = std::min(static_cast<int>(s), nr - 2);
  const double fr = s - i;
  return (1 - fr) * u[i] + fr * u[i + 1];
}

double SimConfig::admissible_dt(double h, double eps, const Bistable& f) {
  const double sup_fp = f.sup_abs_fprime(f.a_minus - 1.0, f.a_plus + 1.0);
  // the third cap keeps the explicit update monotone, which the comparison
  // principle rests on; it is always within the first two up to a factor 1.2
  const double monotone = 0.95 / (4.0 / (h * h) + sup_fp / (eps * eps));
  return std::min({h * h / 4.0, 0.2 * eps * eps / sup_fp, monotone});
}

Field2D laplacian_neumann(const Field2D& phi) {
  Field2D out;
  out.grid = phi.grid;
  out.time = phi.time;
  out.u.assign(phi.u.size(), 0.0);
  const int nx = phi.grid.nx, ny = phi.grid.ny;
  const double inv_h2 = 1.0 / (phi.grid.h * phi.grid.h);
  for (int j = 0; j < ny; ++j) {
    const int jm = (j == 0) ? 1 : j - 1;
    const int jp = (j == ny - 1) ? ny - 2 : j + 1;
    for (int i = 0; i < nx; ++i) {
      const int im = (i == 0) ? 1 : i - 1;
      const int ip = (i == nx - 1) ? nx - 2 : i + 1;
      out.at(i, j) = (phi.at(im, j) + phi.at(ip, j) + phi.at(i, jm) + phi.at(i, jp) -
                      4.0 * phi.at(i, j)) *
                     inv_h2;
    }
  }
  return out;
}

namespace {

struct StepGuard {
  double lo, hi;
};

template <class F>
void step2d(Field2D& st, std::vector<double>& next, double dt, double eps, double noise_mid,
            const StepGuard& guard, F&& f) {
  const int nx = st.grid.nx, ny = st.grid.ny;
  const double inv_h2 = 1.0 / (st.grid.h * st.grid.h);
  const double inv_eps2 = 1.0 / (eps * eps);
  const double forcing = noise_mid / eps;
  double vmin = 1e300, vmax = -1e300;
  const double* u = st.u.data();
  double* out = next.data();
  for (int j = 0; j < ny; ++j) {
    const int jm = (j == 0) ? 1 : j - 1;
    const int jp = (j == ny - 1) ? ny - 2 : j + 1;
    const double* row = u + static_cast<std::size_t>(j) * nx;
    const double* rm = u + static_cast<std::size_t>(jm) * nx;
    const double* rp = u + static_cast<std::size_t>(jp) * nx;
    double* orow = out + static_cast<std::size_t>(j) * nx;
    for (int i = 0; i < nx; ++i) {
      const int im = (i == 0) ? 1 : i - 1;
      const int ip = (i == nx - 1) ? nx - 2 : i + 1;
      const double uc = row[i];
      const double lap = (row[im] + row[ip] + rm[i] + rp[i] - 4.0 * uc) * inv_h2;
      const double v = uc + dt * (lap + inv_eps2 * f(uc) + forcing);
      orow[i] = v;
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  if (vmin < guard.lo || vmax > guard.hi)
    raise(errc::blow_up, "field left the guard range [a_- - 2, a_+ + 2]");
  st.u.swap(next);
  st.time += dt;
}

template <class F>
void step_radial(FieldRadial& st, std::vector<double>& next, double dt, double eps,
                 double noise_mid, const StepGuard& guard, F&& f) {
  const int nr = st.nr;
  const double h = st.h();
  const double inv_h2 = 1.0 / (h * h);
  const double inv_eps2 = 1.0 / (eps * eps);
  const double forcing = noise_mid / eps;
  const double* u = st.u.data();
  double* out = next.data();
  double vmin = 1e300, vmax = -1e300;
  for (int i = 0; i < nr; ++i) {
    double lap;
    if (i == 0) {
      lap = 4.0 * (u[1] - u[0]) * inv_h2;  // symmetric limit u_rr + u_r/r -> 2 u_rr
    } else if (i == nr - 1) {
      lap = 2.0 * (u[nr - 2] - u[nr - 1]) * inv_h2;  // mirror end, u_r = 0
    } else {
      const double urr = (u[i + 1] - 2.0 * u[i] + u[i - 1]) * inv_h2;
      const double ur = (u[i + 1] - u[i - 1]) / (2.0 * h);
      lap = urr + ur / (h * i);
    }
    const double v = u[i] + dt * (lap + inv_eps2 * f(u[i]) + forcing);
    out[i] = v;
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }
  if (vmin < guard.lo || vmax > guard.hi)
    raise(errc::blow_up, "radial field left the guard range");
  st.u.swap(next);
  st.time += dt;
}

template <class Stepper>
void dispatch_nonlinearity(const SimConfig& cfg, Stepper&& go) {
  if (cfg.f->is_cubic) {
    go([](double u) { return u - u * u * u; });
  } else {
    const auto& f = cfg.f->f;
    go([&f](double u) { return f(u); });
  }
}

StepGuard guard_of(const Bistable& f) { return {f.a_minus - 2.0, f.a_plus + 2.0}; }

}  // namespace

void step_ac(Field2D& state, const SimConfig& cfg) {
  std::vector<double> scratch(state.u.size());
  const double mid = state.time + 0.5 * cfg.dt;
  const double noise_mid = cfg.noise ? cfg.noise->xi(mid) : 0.0;
  dispatch_nonlinearity(cfg, [&](auto&& f) {
    step2d(state, scratch, cfg.dt, cfg.eps, noise_mid, guard_of(*cfg.f), f);
  });
}

void step_ac_radial(FieldRadial& state, const SimConfig& cfg) {
  std::vector<double> scratch(state.u.size());
  const double mid = state.time + 0.5 * cfg.dt;
  const double noise_mid = cfg.noise ? cfg.noise->xi(mid) : 0.0;
  dispatch_nonlinearity(cfg, [&](auto&& f) {
    step_radial(state, scratch, cfg.dt, cfg.eps, noise_mid, guard_of(*cfg.f), f);
  });
}

namespace {

std::vector<long> snapshot_steps(const std::vector<double>& times, double dt, long n_steps) {
  std::vector<long> steps;
  for (double t : times)
    steps.push_back(std::clamp<long>(std::lround(t / dt), 0, n_steps));
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

}  // namespace

Trajectory run_simulation(const SimConfig& cfg_in, const Field2D& u0) {
  SimConfig cfg = cfg_in;
  const double cap = SimConfig::admissible_dt(u0.grid.h, cfg.eps, *cfg.f);
  if (cfg.dt <= 0.0) cfg.dt = cap;
  if (cfg.dt > cap * (1.0 + 1e-12)) raise(errc::bad_config, "dt exceeds the admissible cap");
  const auto t_start = std::chrono::steady_clock::now();

  Trajectory traj;
  traj.dt = cfg.dt;
  traj.eps = cfg.eps;
  traj.seed = cfg.seed;
  traj.noise_checksum = cfg.noise ? cfg.noise->checksum() : 0;
  const long n_steps = std::lround(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  auto snaps = snapshot_steps(cfg.snapshot_times, cfg.dt, n_steps);

  Field2D state = u0;
  std::vector<double> scratch(state.u.size());
  const StepGuard guard = guard_of(*cfg.f);
  auto maybe_snapshot = [&](long step) {
    if (std::binary_search(snaps.begin(), snaps.end(), step)) traj.snapshots.push_back(state);
  };
  maybe_snapshot(0);
  dispatch_nonlinearity(cfg, [&](auto&& f) {
    for (long s = 1; s <= n_steps; ++s) {
      const double mid = state.time + 0.5 * cfg.dt;
      const double noise_mid = cfg.noise ? cfg.noise->xi(mid) : 0.0;
      step2d(state, scratch, cfg.dt, cfg.eps, noise_mid, guard, f);
      maybe_snapshot(s);
    }
  });
  if (cfg.snapshot_times.empty()) traj.snapshots.push_back(state);
  traj.step_count = n_steps;
  traj.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return traj;
}

TrajectoryRadial run_simulation_radial(const SimConfig& cfg_in, const FieldRadial& u0) {
  SimConfig cfg = cfg_in;
  const double cap = SimConfig::admissible_dt(u0.h(), cfg.eps, *cfg.f);
  if (cfg.dt <= 0.0) cfg.dt = cap;
  if (cfg.dt > cap * (1.0 + 1e-12)) raise(errc::bad_config, "dt exceeds the admissible cap");
  const auto t_start = std::chrono::steady_clock::now();

  TrajectoryRadial traj;
  traj.dt = cfg.dt;
  traj.eps = cfg.eps;
  traj.seed = cfg.seed;
  traj.noise_checksum = cfg.noise ? cfg.noise->checksum() : 0;
  const long n_steps = std::lround(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  auto snaps = snapshot_steps(cfg.snapshot_times, cfg.dt, n_steps);

  FieldRadial state = u0;
  std::vector<double> scratch(state.u.size());
  const StepGuard guard = guard_of(*cfg.f);
  auto maybe_snapshot = [&](long step) {
    if (std::binary_search(snaps.begin(), snaps.end(), step)) traj.snapshots.push_back(state);
  };
  maybe_snapshot(0);
  dispatch_nonlinearity(cfg, [&](auto&& f) {
    for (long s = 1; s <= n_steps; ++s) {
      const double mid = state.time + 0.5 * cfg.dt;
      const double noise_mid = cfg.noise ? cfg.noise->xi(mid) : 0.0;
      step_radial(state, scratch, cfg.dt, cfg.eps, noise_mid, guard, f);
      maybe_snapshot(s);
    }
  });
  if (cfg.snapshot_times.empty()) traj.snapshots.push_back(state);
  traj.step_count = n_steps;
  traj.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return traj;
}

std::string Trajectory::manifest_json() const {
  nlohmann::json j;
  j["dt"] = dt;
  j["eps"] = eps;
  j["seed"] = seed;
  j["step_count"] = step_count;
  j["noise_checksum"] = noise_checksum;
  j["wall_seconds"] = wall_seconds;
  j["snapshots"] = snapshots.size();
  return j.dump(2);
}

Field2D ic_circle(const Grid2D& g, const Bistable& f, Vec2 center, double radius, double width) {
  Field2D out;
  out.grid = g;
  out.u.resize(g.size());
  const double amp = f.a_plus - f.a_unstable;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double d = std::hypot(g.x(i) - center.x, g.y(j) - center.y) - radius;
      out.at(i, j) = f.a_unstable + amp * std::tanh(d / width);
    }
  return out;
}

Field2D ic_ellipse(const Grid2D& g, const Bistable& f, Vec2 center, double ax, double ay,
                   double width) {
  Field2D out;
  out.grid = g;
  out.u.resize(g.size());
  const double amp = f.a_plus - f.a_unstable;
  const double scale = std::min(ax, ay);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double ex = (g.x(i) - center.x) / ax, ey = (g.y(j) - center.y) / ay;
      const double d = (std::sqrt(ex * ex + ey * ey) - 1.0) * scale;
      out.at(i, j) = f.a_unstable + amp * std::tanh(d / width);
    }
  return out;
}

Field2D ic_planar(const Grid2D& g, const Bistable& f, double x_cross, double width) {
  Field2D out;
  out.grid = g;
  out.u.resize(g.size());
  const double amp = f.a_plus - f.a_unstable;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out.at(i, j) = f.a_unstable + amp * std::tanh((g.x(i) - x_cross) / width);
  return out;
}

Field2D ic_constant(const Grid2D& g, double value) {
  Field2D out;
  out.grid = g;
  out.u.assign(g.size(), value);
  return out;
}

Field2D ic_from_csv(const Grid2D& g, const std::string& path) {
  Field2D out;
  out.grid = g;
  out.u.assign(g.size(), 0.0);
  const auto rows = read_csv(path);
  if (rows.size() != g.size() + 1)
    raise(errc::bad_config, "custom field CSV must have one header and nx*ny rows");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 3) raise(errc::bad_config, "custom field CSV needs x,y,u columns");
    const double x = std::stod(rows[r][0]), y = std::stod(rows[r][1]);
    const double u = std::stod(rows[r][2]);
    const int i = static_cast<int>(std::lround((x - g.x0) / g.h));
    const int j = static_cast<int>(std::lround((y - g.y0) / g.h));
    if (i < 0 || i >= g.nx || j < 0 || j >= g.ny ||
        std::abs(g.x(i) - x) > 1e-9 || std::abs(g.y(j) - y) > 1e-9)
      raise(errc::bad_config, "custom field CSV node off the grid");
    out.at(i, j) = u;
  }
  return out;
}

FieldRadial ic_circle_radial(int nr, double r_max, const Bistable& f, double radius,
                             double width) {
  FieldRadial out;
  out.nr = nr;
  out.r_max = r_max;
  out.u.resize(nr);
  const double amp = f.a_plus - f.a_unstable;
  for (int i = 0; i < nr; ++i)
    out.u[i] = f.a_unstable + amp * std::tanh((out.h() * i - radius) / width);
  return out;
}

void write_snapshot_csv(const Field2D& field, const std::string& path) {
  CsvWriter csv(path);
  csv.row("x", "y", "u");
  for (int j = 0; j < field.grid.ny; ++j)
    for (int i = 0; i < field.grid.nx; ++i)
      csv.row(field.grid.x(i), field.grid.y(j), field.at(i, j));
}

}  // namespace sac
