#include "sac/reaction.hpp"

#include <algorithm>
#include <cmath>

#include "sac/numerics.hpp"

namespace sac {

double Bistable::eta0() const { return std::min(a_unstable - a_minus, a_plus - a_unstable); }

double Bistable::sup_abs_fprime(double lo, double hi) const {
  double s = 0.0;
  const int n = 2000;
  for (int i = 0; i <= n; ++i) {
    const double u = lo + (hi - lo) * i / n;
    s = std::max(s, std::abs(fprime(u)));
  }
  return s;
}

double Bistable::sup_abs_fsecond(double lo, double hi) const {
  double s = 0.0;
  const int n = 2000;
  for (int i = 0; i <= n; ++i) {
    const double u = lo + (hi - lo) * i / n;
    s = std::max(s, std::abs(fsecond(u)));
  }
  return s;
}

Bistable make_cubic() {
  Bistable b;
  b.f = [](double u) { return u - u * u * u; };
  b.fprime = [](double u) { return 1.0 - 3.0 * u * u; };
  b.fsecond = [](double u) { return -6.0 * u; };
  b.F = [](double u) {
    const double w = 1.0 - u * u;
    return 0.25 * w * w;
  };
  b.a_minus = -1.0;
  b.a_unstable = 0.0;
  b.a_plus = 1.0;
  b.is_cubic = true;
  return b;
}

std::array<double, 3> find_zeros(const std::function<double(double)>& f,
                                 std::array<std::pair<double, double>, 3> brackets, double tol) {
  std::array<double, 3> roots{};
  for (int i = 0; i < 3; ++i) {
    const auto [lo, hi] = brackets[i];
    if (!(lo < hi)) raise(errc::no_sign_change, "bracket is not an interval");
    if (i > 0 && !(brackets[i - 1].second <= lo))
      raise(errc::no_sign_change, "brackets overlap or are out of order");
    roots[i] = find_root_bisect(f, lo, hi, tol);
  }
  // derivative signs per the bistability condition, central differences
  auto dnum = [&](double u) {
    const double h = 1e-6 * std::max(1.0, std::abs(u));
    return (f(u + h) - f(u - h)) / (2.0 * h);
  };
  if (!(dnum(roots[0]) < 0.0 && dnum(roots[2]) < 0.0 && dnum(roots[1]) > 0.0))
    raise(errc::not_bistable, "derivative signs at the three roots are not (-,+,-)");
  return roots;
}

Bistable make_bistable(std::function<double(double)> f, std::function<double(double)> fprime,
                       std::function<double(double)> fsecond,
                       std::array<std::pair<double, double>, 3> brackets) {
  Bistable b;
  const auto roots = find_zeros(f, brackets, 1e-13);
  b.a_minus = roots[0];
  b.a_unstable = roots[1];
  b.a_plus = roots[2];
  const double a_plus = b.a_plus;
  auto fc = f;
  b.F = [fc, a_plus](double u) {
    return integrate([&fc](double v) { return fc(v); }, u, a_plus, 1e-12);
  };
  b.f = std::move(f);
  b.fprime = std::move(fprime);
  b.fsecond = std::move(fsecond);
  return b;
}

bool check_balanced(const std::function<double(double)>& f, double a_minus, double a_plus,
                    double tol) {
  return std::abs(integrate(f, a_minus, a_plus, 0.1 * tol)) <= tol;
}

void require_balanced(const Bistable& b, double tol) {
  if (!check_balanced(b.f, b.a_minus, b.a_plus, tol))
    raise(errc::unbalanced_nonlinearity, "the wells of F are not of equal depth");
}

ShiftedBistable shift_nonlinearity(const Bistable& base, double shift) {
  ShiftedBistable out;
  out.base = base;
  out.shift = shift;
  // The critical points of f separate the three roots for every admissible
  // shift, so bracket at them rather than near the unshifted zeros.
  const double u_min =
      find_root_bisect([&](double u) { return base.fprime(u); }, base.a_minus, base.a_unstable,
                       1e-14);
  const double u_max =
      find_root_bisect([&](double u) { return base.fprime(u); }, base.a_unstable, base.a_plus,
                       1e-14);
  auto fs = [&](double u) { return base.f(u) + shift; };
  // outer endpoints walked outward until f + shift recovers the outer sign
  double lo = base.a_minus - (base.a_unstable - base.a_minus);
  for (int i = 0; i < 8 && !(fs(lo) > 0.0); ++i) lo -= (u_min - lo);
  double hi = base.a_plus + (base.a_plus - base.a_unstable);
  for (int i = 0; i < 8 && !(fs(hi) < 0.0); ++i) hi += (hi - u_max);
  std::array<std::pair<double, double>, 3> brackets = {
      std::make_pair(lo, u_min), std::make_pair(u_min, u_max), std::make_pair(u_max, hi)};
  try {
    const auto roots = find_zeros(fs, brackets, 1e-13);
    out.a_minus_eps = roots[0];
    out.a_eps = roots[1];
    out.a_plus_eps = roots[2];
  } catch (const Error&) {
    raise(errc::shift_too_large, "bistability lost after shifting f");
  }
  out.mu_eps = base.fprime(out.a_eps);
  if (out.mu_eps <= 0.0) raise(errc::shift_too_large, "middle zero is no longer unstable");
  return out;
}

namespace {

// RK4 sweep of y' = f(y) + delta shared by the scalar and tabulated solvers.
template <class Guard>
void rk4_sweep(const ShiftedBistable& fe, double delta, double dtau, int n_steps,
               std::vector<double>& y, Guard&& guard) {
  auto rhs = [&](double v) { return fe.f(v) + delta; };
  for (int s = 0; s < n_steps; ++s) {
    for (double& v : y) {
      const double k1 = rhs(v);
      const double k2 = rhs(v + 0.5 * dtau * k1);
      const double k3 = rhs(v + 0.5 * dtau * k2);
      const double k4 = rhs(v + dtau * k3);
      v += dtau / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      guard(v);
    }
  }
}

}  // namespace

ReactionPath solve_reaction_ode(const ShiftedBistable& fe, double delta, double xi0,
                                double tau_end, double dtau) {
  if (!(dtau > 0.0)) raise(errc::bad_config, "dtau must be positive");
  const double lo = fe.base.a_minus - 2.0;
  const double hi = fe.base.a_plus + 2.0;
  ReactionPath path;
  path.dtau = dtau;
  const int n = std::max(0, static_cast<int>(std::ceil(tau_end / dtau - 1e-12)));
  path.tau.reserve(n + 1);
  path.y.reserve(n + 1);
  path.tau.push_back(0.0);
  path.y.push_back(xi0);
  std::vector<double> v{xi0};
  auto guard = [&](double val) {
    if (!(val >= lo && val <= hi))
      raise(errc::step_too_large, "reaction trajectory left the guard range");
  };
  double tau = 0.0;
  for (int s = 0; s < n; ++s) {
    const double step = std::min(dtau, tau_end - tau);
    rk4_sweep(fe, delta, step, 1, v, guard);
    tau += step;
    path.tau.push_back(tau);
    path.y.push_back(v[0]);
  }
  return path;
}

ReactionFlowTable::ReactionFlowTable(const ShiftedBistable& fe, double delta, double tau,
                                     double dtau, int n_pts) {
  xi_lo_ = fe.base.a_minus - 1.0;
  xi_hi_ = fe.base.a_plus + 1.0;
  dxi_ = (xi_hi_ - xi_lo_) / (n_pts - 1);
  y_.resize(n_pts);
  for (int i = 0; i < n_pts; ++i) y_[i] = xi_lo_ + dxi_ * i;
  const double lo = fe.base.a_minus - 2.0;
  const double hi = fe.base.a_plus + 2.0;
  auto guard = [&](double val) {
    if (!(val >= lo && val <= hi))
      raise(errc::step_too_large, "reaction flow table left the guard range");
  };
  const int n_full = static_cast<int>(std::floor(tau / dtau + 1e-12));
  rk4_sweep(fe, delta, dtau, n_full, y_, guard);
  const double rest = tau - n_full * dtau;
  if (rest > 1e-15) rk4_sweep(fe, delta, rest, 1, y_, guard);
}

double ReactionFlowTable::operator()(double xi) const {
  if (xi < xi_lo_ || xi > xi_hi_)
    raise(errc::step_too_large, "envelope argument outside the tabulated range");
  const double s = (xi - xi_lo_) / dxi_;
  auto i = static_cast<std::size_t>(s);
  if (i + 1 >= y_.size()) i = y_.size() - 2;
  const double w = s - static_cast<double>(i);
  return (1.0 - w) * y_[i] + w * y_[i + 1];
}

Envelopes generation_envelopes(const ShiftedBistable& fe, const std::vector<double>& u0, double t,
                               double eps, double C, double mu_tilde, double dtau) {
  const double tau = t / (eps * eps);
  const double bump = eps * eps * C * (std::exp(mu_tilde * tau) - 1.0);
  const ReactionFlowTable flow_minus(fe, -eps, tau, dtau);
  const ReactionFlowTable flow_plus(fe, +eps, tau, dtau);
  Envelopes env;
  env.lower.resize(u0.size());
  env.upper.resize(u0.size());
  for (std::size_t i = 0; i < u0.size(); ++i) {
    env.lower[i] = flow_minus(u0[i] - bump);
    env.upper[i] = flow_plus(u0[i] + bump);
  }
  return env;
}

}  // namespace sac
