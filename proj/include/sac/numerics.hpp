#pragma once

#include <functional>
#include <vector>

namespace sac {

// Adaptive Simpson quadrature, absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

// Bisection to |b-a| <= tol, then a few Newton polishing steps when fprime is
// supplied. Requires a sign change on [a,b].
double find_root_bisect(const std::function<double(double)>& f, double a, double b, double tol,
                        const std::function<double(double)>* fprime = nullptr);

// Cubic Hermite on one interval [0,h]: values f0,f1 and derivatives d0,d1.
inline double hermite(double s, double h, double f0, double f1, double d0, double d1) {
  const double t = s / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * f1 +
         (t3 - t2) * h * d1;
}

inline double hermite_deriv(double s, double h, double f0, double f1, double d0, double d1) {
  const double t = s / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * f0 + (3 * t2 - 4 * t + 1) * h * d0 + (-6 * t2 + 6 * t) * f1 +
          (3 * t2 - 2 * t) * h * d1) /
         h;
}

// Exact integral of the cubic Hermite interpolant over its interval.
inline double hermite_integral(double h, double f0, double f1, double d0, double d1) {
  return h * 0.5 * (f0 + f1) + h * h / 12.0 * (d0 - d1);
}

// Uniformly sampled function with stored derivatives; piecewise cubic Hermite.
struct HermiteSeries {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<double> f;
  std::vector<double> d;

  bool empty() const { return f.empty(); }
  double t_min() const { return t0; }
  double t_max() const { return t0 + dt * (static_cast<double>(f.size()) - 1); }
  double value(double t) const;
  double deriv(double t) const;
  // Integral of the interpolant from t0 to t.
  double integral_to(double t) const;
};

// Natural cubic spline on strictly increasing abscissae.
class CubicSpline {
public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

private:
  std::vector<double> x_, y_, m_;  // m_: second derivatives
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v);  // unbiased

}  // namespace sac
