#include "sac/wave.hpp"

#include <algorithm>
#include <cmath>

#include "sac/numerics.hpp"

namespace sac {

namespace {

struct ShootResult {
  int verdict = 0;  // +1 overshoot (c too small), -1 undershoot (c too large), 0 connected
  std::vector<double> m, v;  // recorded when requested
  double dz = 0.0;
};

// Integrate m' = v, v' = -c v - (f(m) + delta) from the unstable manifold of
// a_-(delta). Records the trajectory only for the final pass.
ShootResult shoot(const Bistable& f, double delta, const ShiftedBistable& zeros, double c,
                  double e0, double dz, double z_guard, bool record) {
  const double a_lo = zeros.a_minus_eps, a_hi = zeros.a_plus_eps;
  const double fp_lo = f.fprime(a_lo);
  const double s_plus = 0.5 * (-c + std::sqrt(c * c - 4.0 * fp_lo));
  double m = a_lo + e0;
  double v = s_plus * e0;
  ShootResult out;
  out.dz = dz;
  if (record) {
    out.m.reserve(static_cast<std::size_t>(z_guard / dz) + 2);
    out.v.reserve(static_cast<std::size_t>(z_guard / dz) + 2);
    out.m.push_back(m);
    out.v.push_back(v);
  }
  const double over = a_hi + 0.2 * (a_hi - a_lo);
  auto acc = [&](double mm, double vv) { return -c * vv - (f.f(mm) + delta); };
  const auto n_max = static_cast<long>(z_guard / dz);
  for (long i = 0; i < n_max; ++i) {
    const double k1m = v, k1v = acc(m, v);
    const double k2m = v + 0.5 * dz * k1v, k2v = acc(m + 0.5 * dz * k1m, v + 0.5 * dz * k1v);
    const double k3m = v + 0.5 * dz * k2v, k3v = acc(m + 0.5 * dz * k2m, v + 0.5 * dz * k2v);
    const double k4m = v + dz * k3v, k4v = acc(m + dz * k3m, v + dz * k3v);
    m += dz / 6.0 * (k1m + 2 * k2m + 2 * k3m + k4m);
    v += dz / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    if (record) {
      out.m.push_back(m);
      out.v.push_back(v);
    }
    if (m > over) {
      out.verdict = +1;
      return out;
    }
    if (v <= 0.0) {
      out.verdict = (m >= a_hi - 1e-9) ? 0 : -1;
      return out;
    }
  }
  // Guard exhausted with v still positive. Either the orbit has reached the
  // upper zero (a connection at this resolution), or strong damping made the
  // middle zero a stable node and the orbit stalled there: that is an
  // undershoot.
  out.verdict = (m >= a_hi - 1e-6) ? 0 : -1;
  return out;
}

double decay_rate_left(double c, double fp) { return 0.5 * (-c + std::sqrt(c * c - 4.0 * fp)); }
double decay_rate_right(double c, double fp) { return 0.5 * (c + std::sqrt(c * c - 4.0 * fp)); }

}  // namespace

double WaveProfile::eval_m(double zq) const {
  if (zq > z_half) return a_plus_d - (a_plus_d - m.back()) * std::exp(-lambda_right * (zq - z_half));
  if (zq < -z_half)
    return a_minus_d + (m.front() - a_minus_d) * std::exp(lambda_left * (zq + z_half));
  const double s = (zq + z_half) / dz;
  auto i = static_cast<std::size_t>(s);
  if (i + 1 >= m.size()) i = m.size() - 2;
  const double local = (s - static_cast<double>(i)) * dz;
  return hermite(local, dz, m[i], m[i + 1], mz[i], mz[i + 1]);
}

double WaveProfile::eval_mz(double zq) const {
  if (zq > z_half) return (a_plus_d - eval_m(zq)) * lambda_right;
  if (zq < -z_half) return (eval_m(zq) - a_minus_d) * lambda_left;
  const double s = (zq + z_half) / dz;
  auto i = static_cast<std::size_t>(s);
  if (i + 1 >= mz.size()) i = mz.size() - 2;
  const double local = (s - static_cast<double>(i)) * dz;
  return hermite(local, dz, mz[i], mz[i + 1], mzz[i], mzz[i + 1]);
}

WaveProfile solve_wave(const Bistable& f, double delta, double Z, int n_pts, double tol) {
  ShiftedBistable zeros;
  try {
    zeros = shift_nonlinearity(f, delta);
  } catch (const Error&) {
    raise(errc::not_bistable, "f + delta has lost bistability");
  }
  const double a_lo = zeros.a_minus_eps, a_mid = zeros.a_eps, a_hi = zeros.a_plus_eps;
  const double fp_lo = f.fprime(a_lo), fp_hi = f.fprime(a_hi);

  double z_half = Z;
  if (z_half <= 0.0) z_half = 10.0 / std::sqrt(std::min(std::abs(fp_lo), std::abs(fp_hi)));

  for (int attempt = 0; attempt < 6; ++attempt) {
    // speed bracket: overshoot at very negative c, undershoot at very positive c
    const double c_max = 2.0 * std::sqrt(std::max(std::abs(fp_lo), std::abs(fp_hi))) + 1.0;
    const double lam_lo0 = decay_rate_left(0.0, fp_lo);
    // e0 well above the root roundoff so the launch direction is meaningful;
    // the grid beyond the launch point is filled by the linearized tail
    const double e0 =
        std::max(1e-9 * (a_hi - a_lo), (a_mid - a_lo) * std::exp(-lam_lo0 * (z_half + 4.0)));
    // the orbit leaves the saddle at rate lambda_-(c), which collapses for
    // strongly damped shoots; size the guard from it
    auto guard_for = [&](double c) {
      const double lam = decay_rate_left(c, fp_lo);
      return 2.0 * z_half + (60.0 + std::log((a_hi - a_lo) / e0)) / lam;
    };
    const double dz_coarse = 1e-3;
    const double dz_fine = 2.5e-4;

    auto classify = [&](double c, double dz) {
      return shoot(f, delta, zeros, c, e0, dz, guard_for(c), false).verdict;
    };
    auto bisect = [&](double& c_lo, double& c_hi, double dz, double width) {
      while (c_hi - c_lo > width) {
        const double c_mid = 0.5 * (c_lo + c_hi);
        if (c_mid <= c_lo || c_mid >= c_hi) break;
        const int verdict = classify(c_mid, dz);
        if (verdict == +1)
          c_lo = c_mid;
        else if (verdict == -1)
          c_hi = c_mid;
        else
          break;
      }
    };
    double c_lo = -c_max, c_hi = c_max;
    if (classify(c_lo, dz_coarse) != +1 || classify(c_hi, dz_coarse) != -1)
      raise(errc::no_connection, "failed to bracket the wave speed");
    bisect(c_lo, c_hi, dz_coarse, std::max(tol, 1e-8));
    // refine with the recording step size so the final orbit hugs the
    // separatrix as long as possible
    const double widen = 4.0 * (c_hi - c_lo) + 1e-12;
    c_lo -= widen;
    c_hi += widen;
    if (classify(c_lo, dz_fine) != +1 || classify(c_hi, dz_fine) != -1)
      raise(errc::no_connection, "refinement lost the speed bracket");
    bisect(c_lo, c_hi, dz_fine, std::max(tol, 1e-14));
    const double c = 0.5 * (c_lo + c_hi);

    // Final recorded pass. The shot eventually peels off the separatrix, so
    // truncate while the orbit is still connection-like: at a tail gap large
    // enough that the accumulated speed error is invisible, and let an
    // exponential tail with the slope-consistent rate take over.
    auto traj = shoot(f, delta, zeros, c, e0, dz_fine, guard_for(c), true);
    const double gap_target = 3e-6 * (a_hi - a_lo);
    std::size_t i_best = 0;
    for (std::size_t i = 0; i < traj.m.size(); ++i) {
      if (!(traj.m[i] < a_hi) || !(traj.v[i] > 0.0)) break;
      i_best = i;
      if (a_hi - traj.m[i] <= gap_target) break;
    }
    traj.m.resize(i_best + 1);
    traj.v.resize(i_best + 1);
    const double lam_right_lin = decay_rate_right(c, fp_hi);
    const double gap_end = a_hi - traj.m.back();
    const double lam_tail =
        std::clamp(traj.v.back() / gap_end, 0.25 * lam_right_lin, 4.0 * lam_right_lin);

    // locate the pinning crossing m = a(delta); Newton on the Hermite segment
    std::size_t k = 0;
    while (k + 1 < traj.m.size() && traj.m[k + 1] < a_mid) ++k;
    if (k + 1 >= traj.m.size()) raise(errc::no_connection, "profile never reached a(delta)");
    double local = dz_fine * (a_mid - traj.m[k]) / (traj.m[k + 1] - traj.m[k]);
    for (int it = 0; it < 3; ++it) {
      const double val =
          hermite(local, dz_fine, traj.m[k], traj.m[k + 1], traj.v[k], traj.v[k + 1]);
      const double der =
          hermite_deriv(local, dz_fine, traj.m[k], traj.m[k + 1], traj.v[k], traj.v[k + 1]);
      local -= (val - a_mid) / der;
      local = std::clamp(local, 0.0, dz_fine);
    }
    const double z_cross = static_cast<double>(k) * dz_fine + local;

    WaveProfile out;
    out.delta = delta;
    out.c = c;
    out.a_minus_d = a_lo;
    out.a_d = a_mid;
    out.a_plus_d = a_hi;
    out.z_half = z_half;
    out.lambda_left = decay_rate_left(c, fp_lo);
    out.lambda_right = lam_tail;

    int n = n_pts;
    if (n <= 0) n = static_cast<int>(std::ceil(2.0 * z_half / 2e-3)) + 1;
    out.dz = 2.0 * z_half / (n - 1);
    out.z.resize(n);
    out.m.resize(n);
    out.mz.resize(n);
    out.mzz.resize(n);
    const double z_end = (static_cast<double>(traj.m.size()) - 1.0) * dz_fine;
    auto acc = [&](double mm, double vv) { return -c * vv - (f.f(mm) + delta); };
    for (int i = 0; i < n; ++i) {
      const double zq = -z_half + out.dz * i;
      out.z[i] = zq;
      const double zeta = zq + z_cross;  // integration clock
      double mm, vv;
      if (zeta <= 0.0) {
        mm = a_lo + e0 * std::exp(out.lambda_left * zeta);
        vv = (mm - a_lo) * out.lambda_left;
      } else if (zeta >= z_end) {
        const double tail = gap_end * std::exp(-lam_tail * (zeta - z_end));
        mm = a_hi - tail;
        vv = tail * lam_tail;
      } else {
        const double s = zeta / dz_fine;
        auto j = static_cast<std::size_t>(s);
        if (j + 1 >= traj.m.size()) j = traj.m.size() - 2;
        const double local = (s - static_cast<double>(j)) * dz_fine;
        const double d0 = acc(traj.m[j], traj.v[j]);
        const double d1 = acc(traj.m[j + 1], traj.v[j + 1]);
        mm = hermite(local, dz_fine, traj.m[j], traj.m[j + 1], traj.v[j], traj.v[j + 1]);
        vv = hermite(local, dz_fine, traj.v[j], traj.v[j + 1], d0, d1);
      }
      out.m[i] = mm;
      out.mz[i] = vv;
      out.mzz[i] = acc(mm, vv);
    }

    const double mismatch = std::max(std::abs(out.m.front() - a_lo), std::abs(a_hi - out.m.back()));
    if (mismatch > 1e-8 && Z <= 0.0 && attempt + 1 < 6) {
      z_half *= 2.0;
      continue;
    }

    // fitted tail decay rate over (a_hi - m) in [1e-7, 1e-3]
    std::vector<double> zs, ls;
    for (int i = 0; i < n; ++i) {
      const double gap = a_hi - out.m[i];
      if (gap > 1e-7 && gap < 1e-3) {
        zs.push_back(out.z[i]);
        ls.push_back(std::log(gap));
      }
    }
    out.lambda_fit = (zs.size() >= 2) ? -fit_line(zs, ls).slope : out.lambda_right;
    return out;
  }
  raise(errc::no_connection, "domain enlargement did not converge");
}

std::vector<std::pair<double, double>> wave_speed_curve(const Bistable& f,
                                                        const std::vector<double>& deltas) {
  std::vector<std::pair<double, double>> out;
  out.reserve(deltas.size());
  for (double d : deltas) out.emplace_back(d, solve_wave(f, d).c);
  return out;
}

double c0(const Bistable& f) {
  require_balanced(f);
  const double a_lo = f.a_minus, a_hi = f.a_plus;
  const double w = 0.1 * (a_hi - a_lo);
  auto g = [&](double u) { return std::sqrt(std::max(0.0, 2.0 * f.F(u))); };
  // ends via u = a_∓ ± s^2 so that the integrand is smooth in s
  const double left =
      integrate([&](double s) { return 2.0 * s * g(a_lo + s * s); }, 0.0, std::sqrt(w), 1e-11);
  const double right =
      integrate([&](double s) { return 2.0 * s * g(a_hi - s * s); }, 0.0, std::sqrt(w), 1e-11);
  const double middle = integrate(g, a_lo + w, a_hi - w, 1e-11);
  const double total = left + middle + right;
  if (!(total > 0.0)) raise(errc::unbalanced_nonlinearity, "degenerate potential integral");
  return (a_hi - a_lo) / total;
}

double delta0(const Bistable& f) {
  auto bistable_at = [&](double d) {
    try {
      shift_nonlinearity(f, d);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  double bound = 0.0;
  for (int sign : {+1, -1}) {
    double lo = 0.0, hi = 0.01;
    while (bistable_at(sign * hi) && hi < 10.0 * (f.a_plus - f.a_minus)) {
      lo = hi;
      hi *= 2.0;
    }
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (bistable_at(sign * mid) ? lo : hi) = mid;
    }
    bound = (sign == +1) ? lo : std::min(bound, lo);
  }
  return 0.8 * bound;
}

WaveSpeed::WaveSpeed(const Bistable& f, double delta_max, int n_samples) {
  delta_max_ = (delta_max > 0.0) ? delta_max : delta0(f);
  // sample 10% beyond the calibrated range so queries stay clear of the
  // natural-spline end bias
  const double span = 1.1 * delta_max_;
  std::vector<double> xs(n_samples), ys(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    xs[i] = -span + 2.0 * span * i / (n_samples - 1);
    ys[i] = solve_wave(f, xs[i]).c;
  }
  spline_ = CubicSpline(std::move(xs), std::move(ys));
}

double WaveSpeed::operator()(double delta) const {
  if (std::abs(delta) > delta_max_)
    raise(errc::out_of_calibrated_range, "delta outside the calibrated speed curve");
  return spline_(delta);
}

WaveFamily::WaveFamily(const Bistable& f, double delta_max, int n_delta) : f_(f) {
  delta_max_ = (delta_max > 0.0) ? delta_max : delta0(f);
  if (n_delta < 4) n_delta = 4;
  ddelta_ = 2.0 * delta_max_ / (n_delta - 1);
  profiles_.reserve(n_delta);
  for (int i = 0; i < n_delta; ++i) profiles_.push_back(solve_wave(f_, -delta_max_ + ddelta_ * i));
}

void WaveFamily::weights(double delta, int& i0, double w[4]) const {
  if (std::abs(delta) > delta_max_ * (1.0 + 1e-12))
    raise(errc::out_of_calibrated_range, "delta outside the wave family");
  const int n = size();
  const double s = (delta + delta_max_) / ddelta_;
  int ic = static_cast<int>(std::floor(s));
  ic = std::clamp(ic, 1, n - 3);
  i0 = ic - 1;
  // Lagrange weights on the 4 surrounding samples
  const double t = s - static_cast<double>(ic);
  const double tm = t + 1.0, tp = t - 1.0, tq = t - 2.0;
  w[0] = -t * tp * tq / 6.0;
  w[1] = tm * tp * tq / 2.0;
  w[2] = -tm * t * tq / 2.0;
  w[3] = tm * t * tp / 6.0;
}

double WaveFamily::m(double z, double delta) const {
  int i0;
  double w[4];
  weights(delta, i0, w);
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) acc += w[k] * profiles_[i0 + k].eval_m(z);
  return acc;
}

double WaveFamily::mz(double z, double delta) const {
  int i0;
  double w[4];
  weights(delta, i0, w);
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) acc += w[k] * profiles_[i0 + k].eval_mz(z);
  return acc;
}

double WaveFamily::mdelta(double z, double delta) const {
  const double h = ddelta_;
  const double dp = std::min(delta + h, delta_max_);
  const double dm = std::max(delta - h, -delta_max_);
  return (m(z, dp) - m(z, dm)) / (dp - dm);
}

}  // namespace sac
