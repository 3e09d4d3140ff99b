#include "sac/sandwich.hpp"

#include <algorithm>
#include <cmath>

namespace sac {

namespace {

// quintic blend: s for |s| <= d0, +-2 d0 beyond 2 d0, C^2 monotone between
double phi_smooth(double s, double d0) {
  const double mag = std::abs(s);
  if (mag <= d0) return s;
  if (mag >= 2.0 * d0) return std::copysign(2.0 * d0, s);
  const double x = (mag - d0) / d0;
  const double p = x + 4.0 * x * x * x - 7.0 * x * x * x * x + 3.0 * x * x * x * x * x;
  return std::copysign(d0 + d0 * p, s);
}

}  // namespace

SandwichParams compute_params(const Bistable& f, const WaveFamily& family, double T_horizon,
                              double eps0, double K, double d0, double delta_scan,
                              bool enforce_side_conditions) {
  SandwichParams out;
  out.K = K;
  out.d0 = d0;
  out.eps0 = eps0;
  out.T_horizon = T_horizon;
  out.b = 0.2 * 0.5 * (f.a_plus - f.a_minus);

  // spectral margin of f' on the two bands next to the stable zeros
  double rho = 1e300;
  const int n_scan = 1000;
  for (int i = 0; i <= n_scan; ++i) {
    const double lo = f.a_minus + out.b * i / n_scan;
    const double hi = f.a_plus - out.b + out.b * i / n_scan;
    rho = std::min({rho, -f.fprime(lo), -f.fprime(hi)});
  }
  out.rho = rho;
  out.beta = rho / 4.0;

  // wave slope floor on the middle band, scanned over the requested deltas
  double a1 = 1e300;
  const int n_delta = (delta_scan > 0.0) ? 5 : 1;
  for (int kd = 0; kd < n_delta; ++kd) {
    const double delta =
        (n_delta == 1) ? 0.0 : -delta_scan + 2.0 * delta_scan * kd / (n_delta - 1);
    // the band m in [a_-+b, a_+-b] maps to a z-interval by monotonicity
    double z_lo = -40.0, z_hi = 40.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (z_lo + z_hi);
      (family.m(mid, delta) < f.a_minus + out.b ? z_lo : z_hi) = mid;
    }
    const double z_enter = z_lo;
    z_lo = z_enter;
    z_hi = 40.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (z_lo + z_hi);
      (family.m(mid, delta) < f.a_plus - out.b ? z_lo : z_hi) = mid;
    }
    const double z_exit = z_hi;
    for (int i = 0; i <= 2000; ++i) {
      const double z = z_enter + (z_exit - z_enter) * i / 2000.0;
      a1 = std::min(a1, family.mz(z, delta));
    }
  }
  out.a1 = a1;

  const double sup_fp = f.sup_abs_fprime(f.a_minus - 1.0, f.a_plus + 1.0);
  const double sup_fpp = f.sup_abs_fsecond(f.a_minus - 1.0, f.a_plus + 1.0);
  out.sigma0 = a1 / (rho + sup_fp);
  out.sigma1 = 1.0 / (2.0 * (out.beta + 1.0));
  out.sigma2 = 4.0 * out.beta / (sup_fpp * (out.beta + 1.0));
  out.sigma = std::min({out.sigma0, out.sigma1, out.sigma2});
  if (!(out.sigma0 > 0.0) || !(out.sigma1 > 0.0) || !(out.sigma2 > 0.0))
    raise(errc::no_valid_sigma, "one of the sigma constants is non-positive");

  // L selection: deterministic shrinking-circle probe at eps0; the residual
  // itself does not involve the speed curve, so no WaveSpeed is needed here
  const double r_probe = 0.3;
  const Vec2 center{0.5, 0.5};
  DistanceFn circle_dist = [=](Vec2 x, double t) {
    const double r_t = std::sqrt(std::max(1e-8, r_probe * r_probe - 2.0 * t));
    return std::hypot(x.x - center.x, x.y - center.y) - r_t;
  };
  std::vector<double> ts;
  for (double t = eps0 * eps0; t < T_horizon; t *= 2.0) ts.push_back(t);
  ts.push_back(T_horizon);
  std::vector<Vec2> xs;
  for (int i = 0; i <= 40; ++i)
    xs.push_back({center.x + 0.05 + (0.48 - 0.05) * i / 40.0, center.y});
  out.L = 0.0;
  for (double l_try = 1.0; l_try <= 1024.0; l_try *= 2.0) {
    SandwichParams trial = out;
    trial.L = l_try;
    SubSuperPair pair(trial, eps0, &family, nullptr, circle_dist, nullptr);
    const auto rep = residual_check(pair, xs, ts);
    if (rep.pass) {
      out.L = l_try;
      out.probe_min_residual = rep.min_residual_upper;
      out.probe_budget = rep.budget;
      break;
    }
  }
  if (out.L == 0.0)
    raise(errc::side_condition_fail, "no L in [1, 2^10] passes the residual probe");

  out.ep0M_ok = eps0 * eps0 * out.L * std::exp(out.L * T_horizon) <= 1.0;
  out.ga_ok = std::exp(out.L * T_horizon) + K <= d0 / (2.0 * eps0);
  if (enforce_side_conditions) {
    if (!out.ep0M_ok)
      raise(errc::side_condition_fail, "eps0^2 L e^{LT} <= 1 fails at these parameters");
    if (!out.ga_ok)
      raise(errc::side_condition_fail, "e^{LT} + K <= d0/(2 eps0) fails at these parameters");
  }
  return out;
}

SubSuperPair::SubSuperPair(SandwichParams params, double eps, const WaveFamily* family,
                           const WaveSpeed* speed, DistanceFn dist, const MildNoisePath* noise)
    : params_(params), eps_(eps), family_(family), speed_(speed), dist_(std::move(dist)),
      noise_(noise) {}

double SubSuperPair::p(double t) const {
  const auto& c = params_;
  return -std::exp(-c.beta * t / (eps_ * eps_)) + std::exp(c.L * t) + c.K;
}

double SubSuperPair::q(double t) const {
  const auto& c = params_;
  return c.sigma * (c.beta * std::exp(-c.beta * t / (eps_ * eps_)) +
                    eps_ * eps_ * c.L * std::exp(c.L * t));
}

double SubSuperPair::d_smooth(Vec2 x, double t) const { return phi_smooth(dist_(x, t), params_.d0); }

double SubSuperPair::stretched(Vec2 x, double t, double sign) const {
  return (d_smooth(x, t) + sign * eps_ * p(t)) / eps_;
}

std::pair<double, double> SubSuperPair::eval(Vec2 x, double t) const {
  return {eval_lower(x, t), eval_upper(x, t)};
}

double SubSuperPair::eval_upper(Vec2 x, double t) const {
  const double delta = eps_ * xi(t);
  if (std::abs(delta) > family_->delta_max())
    raise(errc::delta_out_of_range, "eps xi(t) outside the wave family range");
  return family_->m(stretched(x, t, +1.0), delta) + q(t);
}

double SubSuperPair::eval_lower(Vec2 x, double t) const {
  const double delta = eps_ * xi(t);
  if (std::abs(delta) > family_->delta_max())
    raise(errc::delta_out_of_range, "eps xi(t) outside the wave family range");
  return family_->m(stretched(x, t, -1.0), delta) - q(t);
}

SubSuperPair::ErrorTerms SubSuperPair::error_terms(Vec2 x, double t, double hx, double ht) const {
  if (hx <= 0.0) hx = eps_ / 12.0;
  if (ht <= 0.0) ht = eps_ * eps_ / 64.0;
  ErrorTerms out;
  const double delta = eps_ * xi(t);
  const double z = stretched(x, t, +1.0);
  const double mz = family_->mz(z, delta);
  const double d_c = d_smooth(x, t);
  const double d_xp = d_smooth({x.x + hx, x.y}, t), d_xm = d_smooth({x.x - hx, x.y}, t);
  const double d_yp = d_smooth({x.x, x.y + hx}, t), d_ym = d_smooth({x.x, x.y - hx}, t);
  const double gx = (d_xp - d_xm) / (2.0 * hx), gy = (d_yp - d_ym) / (2.0 * hx);
  const double lap = (d_xp + d_xm + d_yp + d_ym - 4.0 * d_c) / (hx * hx);
  const double dt_d = (d_smooth(x, t + ht) - d_smooth(x, t - ht)) / (2.0 * ht);
  // m_zz from the profile ODE identity
  const double f_m = family_->nonlinearity().f(family_->m(z, delta));
  const double mzz = -((*speed_)(delta)*mz + f_m + delta);
  out.e2 = (1.0 - (gx * gx + gy * gy)) * mzz / (eps_ * eps_);
  out.e3 = (dt_d - lap + (*speed_)(delta) / eps_) * mz / eps_;
  out.e4 = eps_ * xi_dot(t) * family_->mdelta(z, delta);
  return out;
}

namespace {

double residual_at(const SubSuperPair& pair, Vec2 x, double t, double hx, double ht, bool upper) {
  auto u = [&](Vec2 p, double s) { return upper ? pair.eval_upper(p, s) : pair.eval_lower(p, s); };
  const double u_c = u(x, t);
  const double du_dt = (u(x, t + ht) - u(x, t - ht)) / (2.0 * ht);
  const double lap = (u({x.x + hx, x.y}, t) + u({x.x - hx, x.y}, t) + u({x.x, x.y + hx}, t) +
                      u({x.x, x.y - hx}, t) - 4.0 * u_c) /
                     (hx * hx);
  const double eps = pair.eps();
  return du_dt - lap - pair.family().nonlinearity().f(u_c) / (eps * eps) - pair.xi(t) / eps;
}

}  // namespace

ResidualReport residual_check(const SubSuperPair& pair, const std::vector<Vec2>& xs,
                              const std::vector<double>& ts, double hx, double ht) {
  if (hx <= 0.0) hx = pair.eps() / 12.0;
  if (ht <= 0.0) ht = pair.eps() * pair.eps() / 64.0;
  ResidualReport rep;
  rep.min_residual_upper = 1e300;
  rep.max_residual_lower = -1e300;
  bool ok = true;
  for (double t : ts) {
    if (t - ht / 2.0 <= 0.0) continue;  // centered stencil needs t > ht/2
    for (const Vec2& x : xs) {
      for (int side = 0; side < 2; ++side) {
        const bool upper = (side == 0);
        const double res = residual_at(pair, x, t, hx, ht, upper);
        const double res_fine = residual_at(pair, x, t, hx / 2.0, ht / 2.0, upper);
        const double budget =
            (4.0 / 3.0) * std::abs(res - res_fine) + 1e-6 * (1.0 + std::abs(res));
        rep.budget = std::max(rep.budget, budget);
        if (upper) {
          rep.min_residual_upper = std::min(rep.min_residual_upper, res);
          if (res < -budget) ok = false;
        } else {
          rep.max_residual_lower = std::max(rep.max_residual_lower, res);
          if (res > budget) ok = false;
        }
      }
      ++rep.n_probes;
    }
  }
  rep.pass = ok && rep.n_probes > 0;
  return rep;
}

SandwichReport sandwich_check(const std::vector<Field2D>& snapshots, const SubSuperPair& pair,
                              double t0, double slack) {
  SandwichReport rep;
  rep.worst_margin = 1e300;
  for (const auto& snap : snapshots) {
    if (snap.time < t0 - 1e-12) continue;
    const double tau = std::max(0.0, snap.time - t0);
    ++rep.snapshots_checked;
    const auto& g = snap.grid;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const auto [lo, hi] = pair.eval({g.x(i), g.y(j)}, tau);
        const double u = snap.at(i, j);
        const double margin = std::min(u - lo, hi - u);
        rep.worst_margin = std::min(rep.worst_margin, margin);
        if (margin < -slack) ++rep.violations;
        ++rep.nodes_checked;
      }
  }
  if (rep.snapshots_checked == 0)
    raise(errc::misaligned_times, "no snapshot at or after the alignment time");
  return rep;
}

}  // namespace sac
