#include "sac/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sac/rng.hpp"
#include "json.hpp"

namespace sac {

namespace mollifier {

namespace {

constexpr int kTableN = 4097;

double bump_raw(double x) {
  const double w = 1.0 - x * x;
  return (w > 0.0) ? std::exp(-1.0 / w) : 0.0;
}

struct Tables {
  double norm = 0.0;
  HermiteSeries R;  // cdf, derivative rho
  HermiteSeries Q;  // \int R, derivative R

  Tables() {
    const double h = 2.0 / (kTableN - 1);
    // Gauss-Legendre 5 on each interval for the cdf of the raw bump
    static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                 0.5384693101056831, 0.9061798459386640};
    static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                 0.4786286704993665, 0.2369268850561891};
    std::vector<double> cdf_raw(kTableN, 0.0);
    for (int i = 1; i < kTableN; ++i) {
      const double a = -1.0 + h * (i - 1);
      double s = 0.0;
      for (int g = 0; g < 5; ++g) s += gw[g] * bump_raw(a + 0.5 * h * (1.0 + gx[g]));
      cdf_raw[i] = cdf_raw[i - 1] + 0.5 * h * s;
    }
    norm = cdf_raw.back();
    R.t0 = -1.0;
    R.dt = h;
    R.f.resize(kTableN);
    R.d.resize(kTableN);
    for (int i = 0; i < kTableN; ++i) {
      R.f[i] = cdf_raw[i] / norm;
      R.d[i] = bump_raw(-1.0 + h * i) / norm;
    }
    Q.t0 = -1.0;
    Q.dt = h;
    Q.f.resize(kTableN);
    Q.d = R.f;
    Q.f[0] = 0.0;
    for (int i = 1; i < kTableN; ++i)
      Q.f[i] = Q.f[i - 1] + hermite_integral(h, R.f[i - 1], R.f[i], R.d[i - 1], R.d[i]);
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

double rho(double x) { return bump_raw(x) / tables().norm; }

double rho_prime(double x) {
  const double w = 1.0 - x * x;
  if (w <= 0.0) return 0.0;
  return rho(x) * (-2.0 * x / (w * w));
}

double cdf(double x) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return tables().R.value(x);
}

double cdf_integral(double x) {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return tables().Q.f.back() + (x - 1.0);
  return tables().Q.value(x);
}

double peak() { return rho(0.0); }

}  // namespace mollifier

double BrownianPath::operator()(double t) const {
  const double s = (t - t0) / dt;
  if (s <= 0.0) return w.front();
  const auto n = w.size();
  if (s >= static_cast<double>(n - 1)) return w.back();
  const auto i = static_cast<std::size_t>(s);
  const double frac = s - static_cast<double>(i);
  return w[i] + frac * (w[i + 1] - w[i]);
}

BrownianPath BrownianPath::sample(double t_neg, double t_pos, double dt, std::uint64_t seed) {
  if (!(dt > 0.0) || !(t_pos > 0.0) || t_neg < 0.0)
    raise(errc::bad_config, "BrownianPath needs dt > 0, t_pos > 0, t_neg >= 0");
  const auto n_neg = static_cast<std::size_t>(std::ceil(t_neg / dt - 1e-12));
  const auto n_pos = static_cast<std::size_t>(std::ceil(t_pos / dt - 1e-12));
  BrownianPath path;
  path.seed = seed;
  path.dt = dt;
  path.t0 = -static_cast<double>(n_neg) * dt;
  path.w.assign(n_neg + n_pos + 1, 0.0);
  const double root_dt = std::sqrt(dt);
  Rng fwd(derive_seed(seed, 1));
  for (std::size_t i = 1; i <= n_pos; ++i)
    path.w[n_neg + i] = path.w[n_neg + i - 1] + root_dt * fwd.gaussian();
  // W(t) = W~(-t) for t < 0, independent stream
  Rng bwd(derive_seed(seed, 2));
  for (std::size_t i = 1; i <= n_neg; ++i)
    path.w[n_neg - i] = path.w[n_neg - i + 1] + root_dt * bwd.gaussian();
  return path;
}

namespace {

// Exact convolution of the scaled kernel family with a piecewise-linear path:
// value = (rho_s * path)(t), deriv = (rho_s' * path)(t), dderiv likewise.
struct ConvolveOut {
  double value = 0.0;   // smoothed path
  double deriv = 0.0;   // = d/dt value
  double dderiv = 0.0;  // = d^2/dt^2 value
};

template <class PathAt>
ConvolveOut convolve_linear(double t, double s_kernel, double grid_t0, double grid_dt,
                            std::size_t n, PathAt&& path_at) {
  const double s = s_kernel;
  ConvolveOut out;
  const double lo = t - s, hi = t + s;
  auto k_first = static_cast<long>(std::floor((lo - grid_t0) / grid_dt));
  k_first = std::max<long>(k_first, 0);
  for (long k = k_first; k + 1 < static_cast<long>(n); ++k) {
    const double sk = grid_t0 + grid_dt * static_cast<double>(k);
    const double sk1 = sk + grid_dt;
    if (sk >= hi) break;
    double u1 = t - sk1, u0 = t - sk;  // u = t - s, u0 > u1
    u0 = std::min(u0, s);
    u1 = std::max(u1, -s);
    if (u0 <= u1) continue;
    const double wk = path_at(k), wk1 = path_at(k + 1);
    const double slope = (wk1 - wk) / grid_dt;
    const double a_coef = wk + slope * (t - sk);  // path(s) = a_coef - slope * u
    const double yb = u0 / s, ya = u1 / s;
    const double Rb = mollifier::cdf(yb), Ra = mollifier::cdf(ya);
    const double dR = Rb - Ra;
    const double rb = mollifier::rho(yb) / s, ra = mollifier::rho(ya) / s;
    out.deriv += slope * dR;
    out.dderiv += slope * (rb - ra);
    const double int_u_rho =
        u0 * Rb - u1 * Ra - s * (mollifier::cdf_integral(yb) - mollifier::cdf_integral(ya));
    out.value += a_coef * dR - slope * int_u_rho;
  }
  return out;
}

// quintic fade, 1 at 0 and 0 beyond 1, C^2
double fade(double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  const double x3 = x * x * x;
  return 1.0 - (10.0 * x3 - 15.0 * x3 * x + 6.0 * x3 * x * x);
}

double fade_deriv(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double x2 = x * x;
  return -(30.0 * x2 - 60.0 * x2 * x + 30.0 * x2 * x2);
}

}  // namespace

HermiteSeries mollify(const BrownianPath& w, double eps, double gamma2, double t_max,
                      double sample_dt) {
  const double s = std::pow(eps, gamma2);
  if (w.t_min() > -s || w.t_max() < t_max + s)
    raise(errc::insufficient_support,
          "Brownian grid does not cover the convolution window");
  if (sample_dt <= 0.0) sample_dt = std::pow(eps, 2.0 * gamma2) / 16.0;
  const auto n = static_cast<std::size_t>(std::ceil(t_max / sample_dt - 1e-12)) + 1;
  HermiteSeries out;
  out.t0 = 0.0;
  out.dt = sample_dt;
  out.f.resize(n);
  out.d.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = sample_dt * static_cast<double>(i);
    const auto c = convolve_linear(t, s, w.t0, w.dt, w.w.size(),
                                   [&](long k) { return w.w[static_cast<std::size_t>(k)]; });
    out.f[i] = c.value;
    out.d[i] = c.deriv;
  }
  return out;
}

StationaryBase StationaryBase::sample(double ou_rate, double stat_std, double clip_level,
                                      double mollifier_width, double horizon,
                                      std::uint64_t seed) {
  if (!(ou_rate > 0.0) || !(mollifier_width > 0.0) || !(horizon > 0.0))
    raise(errc::bad_config, "StationaryBase needs positive rate, width and horizon");
  StationaryBase base;
  base.ou_rate = ou_rate;
  base.stat_std = stat_std;
  base.clip_level = clip_level;
  base.mollifier_width = mollifier_width;
  base.seed = seed;
  base.horizon = horizon;

  // kernel half-support 2*width keeps |xi_dot| <= 2 rho(0) M / (2 width) <= M / width
  const double s_kernel = 2.0 * mollifier_width;
  const double dt_ou = std::min(s_kernel / 32.0, 0.05 / ou_rate);
  const double t_lo = -s_kernel - dt_ou, t_hi = horizon + s_kernel + dt_ou;
  const auto n_ou = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / dt_ou)) + 1;

  // exact OU discretization, stationary start
  std::vector<double> y(n_ou);
  Rng rng(derive_seed(seed, 7));
  const double decay = std::exp(-ou_rate * dt_ou);
  const double step_std = stat_std * std::sqrt(1.0 - decay * decay);
  y[0] = stat_std * rng.gaussian();
  for (std::size_t i = 1; i < n_ou; ++i) y[i] = y[i - 1] * decay + step_std * rng.gaussian();
  for (double& v : y) v = std::clamp(v, -clip_level, clip_level);

  const double dt_s = s_kernel / 8.0;
  const auto n_s = static_cast<std::size_t>(std::ceil(horizon / dt_s)) + 1;
  base.xi_series.t0 = 0.0;
  base.xi_series.dt = dt_s;
  base.xi_series.f.resize(n_s);
  base.xi_series.d.resize(n_s);
  base.xi_dot_series.t0 = 0.0;
  base.xi_dot_series.dt = dt_s;
  base.xi_dot_series.f.resize(n_s);
  base.xi_dot_series.d.resize(n_s);
  for (std::size_t i = 0; i < n_s; ++i) {
    const double t = dt_s * static_cast<double>(i);
    const auto c = convolve_linear(t, s_kernel, t_lo, dt_ou, n_ou,
                                   [&](long k) { return y[static_cast<std::size_t>(k)]; });
    base.xi_series.f[i] = c.value;
    base.xi_series.d[i] = c.deriv;
    base.xi_dot_series.f[i] = c.deriv;
    base.xi_dot_series.d[i] = c.dderiv;
  }
  return base;
}

double MildNoisePath::xi(double t) const {
  double v;
  if (kind == Kind::mn1) {
    v = std::pow(eps, -gamma) * base->xi(std::pow(eps, -2.0 * gamma) * t);
  } else {
    v = xi_series_.value(t);
  }
  if (zero_at_origin_) v -= xi0_offset_ * fade(t / t_cut_);
  return v;
}

double MildNoisePath::xi_dot(double t) const {
  double v;
  if (kind == Kind::mn1) {
    v = std::pow(eps, -3.0 * gamma) * base->xi_dot(std::pow(eps, -2.0 * gamma) * t);
  } else {
    v = xi_dot_series_.value(t);
  }
  if (zero_at_origin_) v -= xi0_offset_ * fade_deriv(t / t_cut_) / t_cut_;
  return v;
}

double MildNoisePath::xi_bound() const {
  if (kind != Kind::mn1) raise(errc::bad_config, "deterministic bound is mn1-only");
  return base->clip_level * std::pow(eps, -gamma);
}

double MildNoisePath::xi_dot_bound() const {
  if (kind != Kind::mn1) raise(errc::bad_config, "deterministic bound is mn1-only");
  return base->clip_level / base->mollifier_width * std::pow(eps, -3.0 * gamma);
}

void MildNoisePath::enable_zero_at_origin() {
  zero_at_origin_ = false;
  xi0_offset_ = xi(0.0);
  t_cut_ = (kind == Kind::mn1) ? std::pow(eps, 2.0 * gamma) * 2.0 * base->mollifier_width
                               : std::pow(eps, gamma);
  zero_at_origin_ = true;
}

std::uint64_t MildNoisePath::checksum() const {
  std::uint64_t h = fnv1a(&eps, sizeof(eps));
  h = fnv1a(&gamma, sizeof(gamma), h);
  const HermiteSeries& src = (kind == Kind::mn1) ? base->xi_series : xi_series_;
  if (!src.f.empty()) {
    h = fnv1a(src.f.data(), src.f.size() * sizeof(double), h);
    h = fnv1a(src.d.data(), src.d.size() * sizeof(double), h);
  }
  return h;
}

void MildNoisePath::write_csv(const std::string& path) const {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) raise(errc::bad_config, "cannot open " + path);
  std::fputs("t,xi,xi_dot\n", fp);
  const HermiteSeries& src = (kind == Kind::mn1) ? base->xi_series : xi_series_;
  const double scale_t = (kind == Kind::mn1) ? std::pow(eps, 2.0 * gamma) : 1.0;
  for (std::size_t i = 0; i < src.f.size(); ++i) {
    const double t = scale_t * (src.t0 + src.dt * static_cast<double>(i));
    if (t > t_max * (1.0 + 1e-12)) break;
    std::fprintf(fp, "%.17g,%.17g,%.17g\n", t, xi(t), xi_dot(t));
  }
  std::fclose(fp);
}

void MildNoisePath::write_sidecar_json(const std::string& path) const {
  nlohmann::json j;
  j["kind"] = (kind == Kind::mn1) ? "mn1" : "mn2";
  j["eps"] = eps;
  j["gamma"] = gamma;
  j["seed"] = seed;
  if (kind == Kind::mn1) {
    j["M"] = base->clip_level;
  } else {
    // fitted path constant of the amplitude bound
    double sup = 0.0;
    for (double v : xi_series_.f) sup = std::max(sup, std::abs(v));
    j["M"] = sup * std::pow(eps, gamma / 2.0) / std::sqrt(std::abs(std::log(eps)));
  }
  j["checksum"] = checksum();
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) raise(errc::bad_config, "cannot open " + path);
  const std::string text = j.dump(2);
  std::fwrite(text.data(), 1, text.size(), fp);
  std::fputc('\n', fp);
  std::fclose(fp);
}

MildNoisePath mn2_noise(std::shared_ptr<const BrownianPath> w, double eps, double gamma2,
                        double t_max, double sample_dt) {
  MildNoisePath path;
  path.kind = MildNoisePath::Kind::mn2;
  path.eps = eps;
  path.gamma = gamma2;
  path.seed = w->seed;
  path.t_max = t_max;
  path.brownian = w;
  const double s = std::pow(eps, gamma2);
  if (w->t_min() > -s || w->t_max() < t_max + s)
    raise(errc::insufficient_support, "Brownian grid does not cover the convolution window");
  if (sample_dt <= 0.0) sample_dt = std::pow(eps, 2.0 * gamma2) / 16.0;
  const auto n = static_cast<std::size_t>(std::ceil(t_max / sample_dt - 1e-12)) + 1;
  auto& xs = path.xi_series_;
  auto& xd = path.xi_dot_series_;
  xs.t0 = xd.t0 = 0.0;
  xs.dt = xd.dt = sample_dt;
  xs.f.resize(n);
  xs.d.resize(n);
  xd.f.resize(n);
  xd.d.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = sample_dt * static_cast<double>(i);
    const auto c = convolve_linear(t, s, w->t0, w->dt, w->w.size(),
                                   [&](long k) { return w->w[static_cast<std::size_t>(k)]; });
    xs.f[i] = c.deriv;    // xi = (rho^e)' * W
    xs.d[i] = c.dderiv;   // exact derivative of the same quadrature
    xd.f[i] = c.dderiv;
  }
  // second-derivative samples for xi_dot interpolation, central differences
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ip = std::min(i + 1, n - 1), im = (i > 0) ? i - 1 : 0;
    xd.d[i] = (xd.f[ip] - xd.f[im]) / (static_cast<double>(ip - im) * sample_dt);
  }
  return path;
}

MildNoisePath mn1_noise(std::shared_ptr<const StationaryBase> base, double eps, double gamma1,
                        double t_max) {
  MildNoisePath path;
  path.kind = MildNoisePath::Kind::mn1;
  path.eps = eps;
  path.gamma = gamma1;
  path.seed = base->seed;
  path.t_max = t_max;
  path.base = base;
  const double base_horizon_needed = std::pow(eps, -2.0 * gamma1) * t_max;
  if (base->horizon < base_horizon_needed)
    raise(errc::insufficient_support, "stationary base horizon too short for this eps");
  return path;
}

double alpha0(const StationaryBase& proto, int n_paths, double horizon, double* stderr_out) {
  if (proto.stat_std == 0.0) {
    if (stderr_out) *stderr_out = 0.0;
    return 0.0;
  }
  const double path_len = 8.0 * horizon;
  std::vector<double> alpha_sq(n_paths);
  for (int p = 0; p < n_paths; ++p) {
    const auto base =
        StationaryBase::sample(proto.ou_rate, proto.stat_std, proto.clip_level,
                               proto.mollifier_width, path_len, derive_seed(proto.seed, 100 + p));
    const auto& xs = base.xi_series.f;
    const double dt = base.xi_series.dt;
    const auto n_lag = static_cast<std::size_t>(horizon / dt);
    const auto n_avg = xs.size() - n_lag;
    double integral = 0.0;
    for (std::size_t lag = 0; lag <= n_lag; ++lag) {
      double c = 0.0;
      for (std::size_t i = 0; i < n_avg; ++i) c += xs[i] * xs[i + lag];
      c /= static_cast<double>(n_avg);
      integral += (lag == 0 || lag == n_lag) ? 0.5 * c * dt : c * dt;
    }
    alpha_sq[p] = 2.0 * integral;
  }
  const double m = mean(alpha_sq);
  if (m <= 0.0)
    raise(errc::negative_variance_estimate, "autocovariance tail overwhelms the estimate");
  const double se_sq = std::sqrt(variance(alpha_sq) / n_paths);
  if (stderr_out) *stderr_out = 0.5 * se_sq / std::sqrt(m);  // delta method for sqrt
  return std::sqrt(m);
}

}  // namespace sac
