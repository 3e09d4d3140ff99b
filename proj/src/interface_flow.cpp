#include "sac/interface_flow.hpp"

#include <algorithm>
#include <cmath>

#include "sac/rng.hpp"

namespace sac {

namespace {
const double kTwoPi = 2.0 * 3.14159265358979323846;
}

double GaussMapCurve::min_kappa() const {
  double m = 1e300;
  for (double k : kappa) m = std::min(m, k);
  return m;
}

double GaussMapCurve::kappa_bar() const {
  const double h = dtheta();
  const std::size_t n = kappa.size();
  double bar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = kappa[i];
    const double dk = (kappa[(i + 1) % n] - kappa[(i + n - 1) % n]) / (2.0 * h);
    bar = std::max({bar, k, 1.0 / k, std::abs(dk)});
  }
  return bar;
}

Vec2 GaussMapCurve::closure_defect() const {
  const std::size_t n = kappa.size();
  const double h = dtheta();
  Vec2 defect{0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    // trapezoid over the period: wraps, so this is the full-circle integral
    const double th0 = h * static_cast<double>(i);
    const double th1 = th0 + h;
    const Vec2 t0{-std::sin(th0) / kappa[i], std::cos(th0) / kappa[i]};
    const std::size_t ip = (i + 1) % n;
    const Vec2 t1{-std::sin(th1) / kappa[ip], std::cos(th1) / kappa[ip]};
    defect = defect + 0.5 * h * (t0 + t1);
  }
  return defect;
}

double GaussMapCurve::perimeter() const {
  const double h = dtheta();
  double p = 0.0;
  for (double k : kappa) p += h / k;
  return p;
}

GaussMapCurve step_kappa_spde(const GaussMapCurve& curve, double dt, double c0alpha0, double dW) {
  const std::size_t n = curve.kappa.size();
  const double h = curve.dtheta();
  const double kmin = curve.min_kappa();
  if (!(kmin > 0.0)) raise(errc::convexity_lost, "kappa must be positive");
  double kmax = 0.0;
  for (double k : curve.kappa) kmax = std::max(kmax, k);
  if (dt > 0.1 * h * h / (kmax * kmax) * (1.0 + 1e-9))
    raise(errc::bad_config, "dt violates the parabolic step bound");

  auto drift = [&](const std::vector<double>& k, std::size_t i) {
    const double lap = (k[(i + 1) % n] - 2.0 * k[i] + k[(i + n - 1) % n]) / (h * h);
    return k[i] * k[i] * lap + k[i] * k[i] * k[i];
  };
  std::vector<double> pred(n), next(n);
  for (std::size_t i = 0; i < n; ++i)
    pred[i] = curve.kappa[i] + dt * drift(curve.kappa, i) +
              c0alpha0 * curve.kappa[i] * curve.kappa[i] * dW;
  for (double k : pred)
    if (!(k > 0.0)) raise(errc::convexity_lost, "predictor lost convexity");
  for (std::size_t i = 0; i < n; ++i) {
    const double g_avg =
        0.5 * c0alpha0 * (curve.kappa[i] * curve.kappa[i] + pred[i] * pred[i]);
    next[i] = curve.kappa[i] + 0.5 * dt * (drift(curve.kappa, i) + drift(pred, i)) + g_avg * dW;
  }
  GaussMapCurve out;
  out.base_point = curve.base_point;
  out.kappa = std::move(next);
  for (double k : out.kappa)
    if (!(k > 0.0)) raise(errc::convexity_lost, "corrector lost convexity");
  return out;
}

FrontCurve reconstruct_curve(const GaussMapCurve& curve) {
  const std::size_t n = curve.kappa.size();
  const double h = curve.dtheta();
  if (!(curve.min_kappa() > 0.0)) raise(errc::convexity_lost, "kappa must be positive");

  // integrand g = (1/kappa)(-sin, cos) with derivatives for a 4th-order
  // (Hermite-corrected trapezoid) cumulative integral
  std::vector<Vec2> g(n + 1), gd(n + 1);
  auto kap = [&](std::size_t i) { return curve.kappa[i % n]; };
  for (std::size_t i = 0; i <= n; ++i) {
    const double th = h * static_cast<double>(i);
    const double s = std::sin(th), c = std::cos(th);
    const double k = kap(i);
    const double kd = (kap(i + 1) - kap(i + n - 1)) / (2.0 * h);
    g[i] = {-s / k, c / k};
    gd[i] = {-c / k + s * kd / (k * k), -s / k - c * kd / (k * k)};
  }
  FrontCurve out;
  out.pts.resize(n);
  Vec2 x = curve.base_point;
  out.pts[0] = x;
  for (std::size_t i = 1; i < n; ++i) {
    x.x += hermite_integral(h, g[i - 1].x, g[i].x, gd[i - 1].x, gd[i].x);
    x.y += hermite_integral(h, g[i - 1].y, g[i].y, gd[i - 1].y, gd[i].y);
    out.pts[i] = x;
  }
  Vec2 defect = x;
  defect.x += hermite_integral(h, g[n - 1].x, g[n].x, gd[n - 1].x, gd[n].x) - curve.base_point.x;
  defect.y += hermite_integral(h, g[n - 1].y, g[n].y, gd[n - 1].y, gd[n].y) - curve.base_point.y;
  for (std::size_t i = 0; i < n; ++i)
    out.pts[i] = out.pts[i] - (static_cast<double>(i) / static_cast<double>(n)) * defect;
  return out;
}

double FrontCurve::enclosed_area() const {
  double a = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(pts[i], pts[(i + 1) % n]);
  return 0.5 * a;
}

double FrontCurve::arclength() const {
  double s = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) s += norm(pts[(i + 1) % n] - pts[i]);
  return s;
}

double FrontCurve::min_spacing() const {
  double s = 1e300;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) s = std::min(s, norm(pts[(i + 1) % n] - pts[i]));
  return s;
}

std::vector<double> FrontCurve::curvatures() const {
  const std::size_t n = pts.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Kasa circle fit through the 5-point stencil, centered for conditioning
    const Vec2 c0 = pts[i];
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0, sz = 0, sxz = 0, syz = 0;
    for (int o = -2; o <= 2; ++o) {
      const Vec2 p = pts[(i + n + o) % n] - c0;
      const double z = p.x * p.x + p.y * p.y;
      sx += p.x;
      sy += p.y;
      sxx += p.x * p.x;
      syy += p.y * p.y;
      sxy += p.x * p.y;
      sz += z;
      sxz += z * p.x;
      syz += z * p.y;
    }
    const double m = 5.0;
    // normal equations for z + D x + E y + F = 0
    const double a11 = sxx, a12 = sxy, a13 = sx;
    const double a22 = syy, a23 = sy, a33 = m;
    const double b1 = -sxz, b2 = -syz, b3 = -sz;
    const double det = a11 * (a22 * a33 - a23 * a23) - a12 * (a12 * a33 - a23 * a13) +
                       a13 * (a12 * a23 - a22 * a13);
    if (std::abs(det) < 1e-30) {
      out[i] = 0.0;
      continue;
    }
    const double D = (b1 * (a22 * a33 - a23 * a23) - a12 * (b2 * a33 - a23 * b3) +
                      a13 * (b2 * a23 - a22 * b3)) /
                     det;
    const double E = (a11 * (b2 * a33 - a23 * b3) - b1 * (a12 * a33 - a23 * a13) +
                      a13 * (a12 * b3 - b2 * a13)) /
                     det;
    const double F = (a11 * (a22 * b3 - b2 * a23) - a12 * (a12 * b3 - b2 * a13) +
                      b1 * (a12 * a23 - a22 * a13)) /
                     det;
    const double r2 = 0.25 * (D * D + E * E) - F;
    if (!(r2 > 0.0)) {
      out[i] = 0.0;
      continue;
    }
    const Vec2& pm = pts[(i + n - 1) % n];
    const Vec2& pc = pts[i];
    const Vec2& pp = pts[(i + 1) % n];
    const double turn = cross(pc - pm, pp - pc);
    out[i] = std::copysign(1.0 / std::sqrt(r2), turn);
  }
  return out;
}

Vec2 FrontCurve::inward_normal(std::size_t i) const {
  const std::size_t n = pts.size();
  Vec2 t = pts[(i + 1) % n] - pts[(i + n - 1) % n];
  const double len = norm(t);
  if (len > 0) t = (1.0 / len) * t;
  return {-t.y, t.x};  // CCW orientation
}

namespace {

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

bool FrontCurve::is_simple() const {
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = pts[i], b = pts[(i + 1) % n];
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent around the wrap
      if (segments_intersect(a, b, pts[j], pts[(j + 1) % n])) return false;
    }
  }
  return true;
}

void FrontCurve::redistribute() {
  const std::size_t n = pts.size();
  std::vector<double> s(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) s[i + 1] = s[i] + norm(pts[(i + 1) % n] - pts[i]);
  const double total = s[n];
  std::vector<Vec2> fresh(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double target = total * static_cast<double>(i) / static_cast<double>(n);
    while (seg + 1 < n && s[seg + 1] < target) ++seg;
    const double local = (target - s[seg]) / std::max(1e-300, s[seg + 1] - s[seg]);
    fresh[i] = pts[seg] + local * (pts[(seg + 1) % n] - pts[seg]);
  }
  pts = std::move(fresh);
}

FrontCurve FrontCurve::circle(Vec2 center, double radius, int n) {
  FrontCurve out;
  out.pts.resize(n);
  for (int i = 0; i < n; ++i) {
    const double th = kTwoPi * i / n;
    out.pts[i] = {center.x + radius * std::cos(th), center.y + radius * std::sin(th)};
  }
  return out;
}

void step_front(FrontCurve& curve, double dt, double forcing) {
  const double h_marker = curve.min_spacing();
  if (dt > 0.1 * h_marker * h_marker * (1.0 + 1e-9))
    raise(errc::bad_config, "dt violates the marker step bound");
  const auto kappas = curve.curvatures();
  const std::size_t n = curve.pts.size();
  std::vector<Vec2> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    // 1-2-1 filter along the curve: kills the sawtooth mode the raw fit
    // amplifies, exact on constant-curvature data
    const double k_smooth = 0.25 * (kappas[(i + n - 1) % n] + 2.0 * kappas[i] +
                                    kappas[(i + 1) % n]);
    const Vec2 nrm = curve.inward_normal(i);
    const double v = k_smooth + forcing;
    next[i] = curve.pts[i] + (dt * v) * nrm;
  }
  curve.pts = std::move(next);
  if (++curve.steps_since_redistribute >= 10) {
    curve.steps_since_redistribute = 0;
    curve.redistribute();
    if (!curve.is_simple()) raise(errc::self_intersection, "front curve self-intersects");
  }
  const double h_now = curve.arclength() / static_cast<double>(n);
  if (curve.enclosed_area() < 9.0 * h_now * h_now)
    raise(errc::collapse, "front curve collapsed below the resolution floor");
}

double RadiusPath::at(double time) const {
  if (t.empty()) return 0.0;
  const double s = (time - t.front()) / dt;
  if (s <= 0.0) return r.front();
  if (s >= static_cast<double>(r.size() - 1)) return r.back();
  const auto i = static_cast<std::size_t>(s);
  const double frac = s - static_cast<double>(i);
  return (1.0 - frac) * r[i] + frac * r[i + 1];
}

namespace {

template <class Drift, class NoiseInc>
RadiusPath integrate_radius(double r0, double dt, long n_steps, Drift&& drift,
                            NoiseInc&& noise_inc) {
  RadiusPath path;
  path.dt = dt;
  path.t.reserve(n_steps + 1);
  path.r.reserve(n_steps + 1);
  double r = r0, t = 0.0;
  path.t.push_back(t);
  path.r.push_back(r);
  const double floor = 10.0 * std::sqrt(dt);
  for (long s = 0; s < n_steps; ++s) {
    r += dt * drift(r, t) + noise_inc(s);
    t = dt * static_cast<double>(s + 1);
    path.t.push_back(t);
    path.r.push_back(r);
    if (r < floor) {
      path.extinct = true;
      path.t_extinct = t;
      break;
    }
  }
  return path;
}

}  // namespace

RadiusPath radius_sde_mild(double r0, const MildNoisePath& noise, const WaveSpeed& speed,
                           double eps, double dt, double t_end) {
  const long n = std::lround(std::ceil(t_end / dt - 1e-9));
  return integrate_radius(
      r0, dt, n,
      [&](double r, double t) { return -1.0 / r + speed(eps * noise.xi(t + 0.5 * dt)) / eps; },
      [](long) { return 0.0; });
}

RadiusPath radius_sde_white(double r0, double coef, std::span<const double> dw, double dt) {
  return integrate_radius(
      r0, dt, static_cast<long>(dw.size()), [](double r, double) { return -1.0 / r; },
      [&](long s) { return -coef * dw[static_cast<std::size_t>(s)]; });
}

RadiusPath radius_sde_white_seeded(double r0, double coef, double dt, double t_end,
                                   std::uint64_t seed) {
  const long n = std::lround(std::ceil(t_end / dt - 1e-9));
  Rng rng(seed);
  const double root_dt = std::sqrt(dt);
  std::vector<double> dw(n);
  for (auto& v : dw) v = root_dt * rng.gaussian();
  return radius_sde_white(r0, coef, dw, dt);
}

RadiusPath radius_sde_deterministic(double r0, double dt, double t_end) {
  const long n = std::lround(std::ceil(t_end / dt - 1e-9));
  return integrate_radius(
      r0, dt, n, [](double r, double) { return -1.0 / r; }, [](long) { return 0.0; });
}

namespace {

double square_boundary_dist(Vec2 p) {
  return std::min({p.x, 1.0 - p.x, p.y, 1.0 - p.y});
}

}  // namespace

StoppingMonitor monitor_stopping(const std::vector<std::pair<double, FrontCurve>>& history,
                                 double N) {
  if (history.empty()) raise(errc::bad_config, "empty curve history");
  StoppingMonitor mon;
  mon.threshold = N;
  for (const auto& [t, curve] : history) {
    const auto kappas = curve.curvatures();
    const std::size_t n = curve.pts.size();
    double bar = 0.0;
    bool convex = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double k = kappas[i];
      if (k <= 0.0) {
        convex = false;
        bar = std::max(bar, std::abs(k));
        continue;
      }
      // d_theta kappa = kappa_s / kappa via the arclength-to-angle chain rule
      const double ds = 0.5 * (norm(curve.pts[(i + 1) % n] - curve.pts[i]) +
                               norm(curve.pts[i] - curve.pts[(i + n - 1) % n]));
      const double ks = (kappas[(i + 1) % n] - kappas[(i + n - 1) % n]) / (2.0 * ds);
      bar = std::max({bar, k, 1.0 / k, std::abs(ks / k)});
    }
    if (!convex) mon.non_convex_flagged = true;
    double bdist = 1e300;
    for (const auto& p : curve.pts) bdist = std::min(bdist, square_boundary_dist(p));
    mon.times.push_back(t);
    mon.kappa_bar.push_back(bar);
    mon.boundary_dist.push_back(bdist);
    if (!mon.triggered_at) {
      if (bar > N) {
        mon.triggered_at = t;
        mon.clause = "curvature";
      } else if (bdist < 1.0 / N) {
        mon.triggered_at = t;
        mon.clause = "boundary";
      }
    }
  }
  return mon;
}

StoppingMonitor monitor_stopping_radius(const RadiusPath& path, Vec2 center, double N) {
  StoppingMonitor mon;
  mon.threshold = N;
  for (std::size_t i = 0; i < path.t.size(); ++i) {
    const double r = path.r[i];
    const double bar = std::max(1.0 / r, r);
    const double bdist = square_boundary_dist(center) - r;
    mon.times.push_back(path.t[i]);
    mon.kappa_bar.push_back(bar);
    mon.boundary_dist.push_back(bdist);
    if (!mon.triggered_at) {
      if (bar > N) {
        mon.triggered_at = path.t[i];
        mon.clause = "curvature";
      } else if (bdist < 1.0 / N) {
        mon.triggered_at = path.t[i];
        mon.clause = "boundary";
      }
    }
  }
  return mon;
}

}  // namespace sac
