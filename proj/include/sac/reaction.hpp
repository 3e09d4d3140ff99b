#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "sac/common.hpp"

namespace sac {

// Balanced bistable nonlinearity f with zeros a_- < a < a_+ and potential
// F(u) = \int_u^{a_+} f.
struct Bistable {
  std::function<double(double)> f;
  std::function<double(double)> fprime;
  std::function<double(double)> fsecond;
  std::function<double(double)> F;
  double a_minus = 0.0;
  double a_unstable = 0.0;
  double a_plus = 0.0;
  bool is_cubic = false;  // enables the inlined u - u^3 kernel in hot loops

  double mu() const { return fprime(a_unstable); }
  double eta0() const;  // min(a - a_-, a_+ - a)
  double sup_abs_fprime(double lo, double hi) const;
  double sup_abs_fsecond(double lo, double hi) const;
};

// f(u) = u - u^3 with zeros (-1, 0, 1) and F(u) = (1 - u^2)^2 / 4.
Bistable make_cubic();

// Wraps a user-supplied f; zeros found in the given brackets, F by quadrature.
Bistable make_bistable(std::function<double(double)> f, std::function<double(double)> fprime,
                       std::function<double(double)> fsecond,
                       std::array<std::pair<double, double>, 3> brackets);

// Three ordered roots; throws NoSignChange / NotBistable.
std::array<double, 3> find_zeros(const std::function<double(double)>& f,
                                 std::array<std::pair<double, double>, 3> brackets, double tol);

// |∫_{a_-}^{a_+} f| <= tol ?
bool check_balanced(const std::function<double(double)>& f, double a_minus, double a_plus,
                    double tol = 1e-10);
void require_balanced(const Bistable& b, double tol = 1e-10);

// f^e(u) = f(u) + shift with recomputed zeros; throws ShiftTooLarge.
struct ShiftedBistable {
  Bistable base;
  double shift = 0.0;
  double a_minus_eps = 0.0;
  double a_eps = 0.0;
  double a_plus_eps = 0.0;
  double mu_eps = 0.0;

  double f(double u) const { return base.f(u) + shift; }
  double fprime(double u) const { return base.fprime(u); }
};

ShiftedBistable shift_nonlinearity(const Bistable& base, double shift);

// Trajectory of Y_tau = f^e(Y) + delta, Y(0) = xi0, classical RK4.
struct ReactionPath {
  double dtau = 0.0;
  std::vector<double> tau;
  std::vector<double> y;
  double back() const { return y.back(); }
};

ReactionPath solve_reaction_ode(const ShiftedBistable& fe, double delta, double xi0,
                                double tau_end, double dtau);

// Flow map xi -> Y(tau, xi; delta) tabulated on a uniform xi-grid and
// interpolated linearly (monotonicity-preserving).
class ReactionFlowTable {
public:
  ReactionFlowTable(const ShiftedBistable& fe, double delta, double tau, double dtau,
                    int n_pts = 2049);
  double operator()(double xi) const;

private:
  double xi_lo_, xi_hi_, dxi_;
  std::vector<double> y_;
};

// Generation envelopes w^-(x,t) <= w^+(x,t) evaluated on a vector of initial
// values: w±(x,t) = Y(t/eps^2, u0(x) ± eps^2 C (e^{mu_tilde t/eps^2} - 1); ±eps).
struct Envelopes {
  std::vector<double> lower;
  std::vector<double> upper;
};

Envelopes generation_envelopes(const ShiftedBistable& fe, const std::vector<double>& u0, double t,
                               double eps, double C, double mu_tilde, double dtau = 1e-3);

}  // namespace sac
