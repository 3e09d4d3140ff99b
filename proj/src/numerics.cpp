#include "sac/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "sac/common.hpp"

namespace sac {

const char* errc_name(errc c) {
  switch (c) {
    case errc::no_sign_change: return "NoSignChange";
    case errc::not_bistable: return "NotBistable";
    case errc::shift_too_large: return "ShiftTooLarge";
    case errc::step_too_large: return "StepTooLarge";
    case errc::insufficient_support: return "InsufficientSupport";
    case errc::blow_up: return "BlowUp";
    case errc::empty_level_set: return "EmptyLevelSet";
    case errc::open_curve: return "OpenCurve";
    case errc::self_intersection: return "SelfIntersection";
    case errc::collapse: return "Collapse";
    case errc::convexity_lost: return "ConvexityLost";
    case errc::non_convex_segment: return "NonConvexSegment";
    case errc::negative_variance_estimate: return "NegativeVarianceEstimate";
    case errc::out_of_calibrated_range: return "OutOfCalibratedRange";
    case errc::delta_out_of_range: return "DeltaOutOfRange";
    case errc::no_valid_sigma: return "NoValidSigma";
    case errc::side_condition_fail: return "SideConditionFail";
    case errc::misaligned_times: return "MisalignedTimes";
    case errc::no_connection: return "NoConnection";
    case errc::unbalanced_nonlinearity: return "UnbalancedNonlinearity";
    case errc::bad_config: return "BadConfig";
  }
  return "UnknownError";
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb,
               double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double fm, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, flm);
  const double right = simpson(f, m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(f, a, fa, b, fb, fm);
  return adaptive(f, a, fa, b, fb, fm, whole, tol, 48);
}

double find_root_bisect(const std::function<double(double)>& f, double a, double b, double tol,
                        const std::function<double(double)>* fprime) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) raise(errc::no_sign_change, "bracket has no sign change");
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;  // resolution limit
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  double x = 0.5 * (a + b);
  if (fprime) {
    for (int it = 0; it < 4; ++it) {
      const double fp = (*fprime)(x);
      if (fp == 0.0) break;
      const double step = f(x) / fp;
      const double xn = x - step;
      if (xn < a || xn > b) break;
      x = xn;
      if (std::abs(step) < 1e-17 * std::max(1.0, std::abs(x))) break;
    }
  }
  return x;
}

double HermiteSeries::value(double t) const {
  const std::size_t n = f.size();
  if (n == 0) return 0.0;
  if (n == 1) return f[0];
  double s = (t - t0) / dt;
  if (s <= 0.0) return f[0] + d[0] * (t - t0);
  if (s >= static_cast<double>(n - 1))
    return f[n - 1] + d[n - 1] * (t - (t0 + dt * static_cast<double>(n - 1)));
  const auto i = static_cast<std::size_t>(s);
  const double local = (s - static_cast<double>(i)) * dt;
  return hermite(local, dt, f[i], f[i + 1], d[i], d[i + 1]);
}

double HermiteSeries::deriv(double t) const {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  double s = (t - t0) / dt;
  if (s <= 0.0) return d[0];
  if (s >= static_cast<double>(n - 1)) return d[n - 1];
  const auto i = static_cast<std::size_t>(s);
  const double local = (s - static_cast<double>(i)) * dt;
  return hermite_deriv(local, dt, f[i], f[i + 1], d[i], d[i + 1]);
}

double HermiteSeries::integral_to(double t) const {
  const std::size_t n = f.size();
  if (n < 2) return 0.0;
  const double s = std::min((t - t0) / dt, static_cast<double>(n - 1));
  if (s <= 0.0) return 0.0;
  const auto whole = static_cast<std::size_t>(s);
  double acc = 0.0;
  for (std::size_t i = 0; i < whole; ++i) acc += hermite_integral(dt, f[i], f[i + 1], d[i], d[i + 1]);
  const double rest = (s - static_cast<double>(whole)) * dt;
  if (whole + 1 < n && rest > 0.0) {
    // integral of the Hermite cubic over a partial interval
    const double h = dt, f0 = f[whole], f1 = f[whole + 1], d0 = d[whole], d1 = d[whole + 1];
    const double u = rest / h;
    const double u2 = u * u, u3 = u2 * u, u4 = u2 * u2;
    const double H00 = u - u3 + 0.5 * u4;              // integral of 2t^3-3t^2+1
    const double H10 = 0.5 * u2 - (2.0 / 3.0) * u3 + 0.25 * u4;
    const double H01 = u3 - 0.5 * u4;
    const double H11 = 0.25 * u4 - u3 / 3.0;
    acc += h * (H00 * f0 + H01 * f1) + h * h * (H10 * d0 + H11 * d1);
  }
  return acc;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || n != y_.size()) throw std::invalid_argument("CubicSpline: need >= 2 points");
  m_.assign(n, 0.0);
  if (n == 2) return;
  std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), r(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = x_[i] - x_[i - 1];
    const double hr = x_[i + 1] - x_[i];
    a[i] = hl / 6.0;
    b[i] = (hl + hr) / 3.0;
    c[i] = hr / 6.0;
    r[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
  }
  // Thomas solve on the interior, natural ends m[0]=m[n-1]=0.
  for (std::size_t i = 2; i + 1 < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    r[i] -= w * r[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (r[i] - c[i] * m_[i + 1]) / b[i];
    if (i == 1) break;
  }
}

double CubicSpline::operator()(double x) const {
  const std::size_t n = x_.size();
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = (it == x_.begin()) ? 1 : static_cast<std::size_t>(it - x_.begin());
  i = std::min(i, n - 1);
  const double h = x_[i] - x_[i - 1];
  const double A = (x_[i] - x) / h;
  const double B = 1.0 - A;
  return A * y_[i - 1] + B * y_[i] +
         ((A * A * A - A) * m_[i - 1] + (B * B * B - B) * m_[i]) * h * h / 6.0;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || n != y.size()) throw std::invalid_argument("fit_line: need >= 2 points");
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  if (n > 2) {
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - (out.intercept + out.slope * x[i]);
      ss += e * e;
    }
    out.slope_stderr = std::sqrt(ss / (static_cast<double>(n) - 2.0) / sxx);
  }
  return out;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / (static_cast<double>(v.size()) - 1.0);
}

}  // namespace sac
