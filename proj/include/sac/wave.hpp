#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "sac/numerics.hpp"
#include "sac/reaction.hpp"

namespace sac {

// Monotone traveling-wave profile m(z; delta) with speed c(delta), pinned by
// m(0) = a(delta). Sampled on a uniform z-grid with exponential tails outside.
struct WaveProfile {
  double delta = 0.0;
  double c = 0.0;
  double lambda_fit = 0.0;  // fitted tail decay rate
  double a_minus_d = 0.0, a_d = 0.0, a_plus_d = 0.0;
  double z_half = 0.0;  // grid covers [-z_half, z_half]
  double dz = 0.0;
  std::vector<double> z, m, mz, mzz;
  double lambda_left = 0.0, lambda_right = 0.0;  // linearized tail rates

  double eval_m(double zq) const;
  double eval_mz(double zq) const;
};

// Shooting solver; Z = 0 requests the automatic domain (doubled until the
// boundary mismatch is below 1e-8), n_pts = 0 picks the grid from dz <= 2e-3.
WaveProfile solve_wave(const Bistable& f, double delta, double Z = 0.0, int n_pts = 0,
                       double tol = 1e-12);

std::vector<std::pair<double, double>> wave_speed_curve(const Bistable& f,
                                                        const std::vector<double>& deltas);

// c0 = (a_+ - a_-) / \int sqrt(2F); quadrature with endpoint substitution.
double c0(const Bistable& f);

// Largest shift keeping three zeros, bisected, with a 0.8 safety factor.
double delta0(const Bistable& f);

// Cached cubic-spline interpolant of delta -> c(delta) on [-delta_max, delta_max].
class WaveSpeed {
public:
  WaveSpeed() = default;
  WaveSpeed(const Bistable& f, double delta_max = 0.0, int n_samples = 33);
  double operator()(double delta) const;
  double delta_max() const { return delta_max_; }
  // forcing term -c(eps * xi) / eps of the interface law
  double forcing(double eps, double xi) const { return -(*this)(eps * xi) / eps; }

private:
  double delta_max_ = 0.0;
  CubicSpline spline_;
};

// Family of profiles m(.; delta) interpolated in delta (piecewise-cubic
// Lagrange across solved profiles).
class WaveFamily {
public:
  WaveFamily(const Bistable& f, double delta_max = 0.0, int n_delta = 17);
  double m(double z, double delta) const;
  double mz(double z, double delta) const;
  double mdelta(double z, double delta) const;  // finite difference across samples
  double delta_max() const { return delta_max_; }
  const WaveProfile& profile(int i) const { return profiles_[i]; }
  int size() const { return static_cast<int>(profiles_.size()); }
  const Bistable& nonlinearity() const { return f_; }

private:
  void weights(double delta, int& i0, double w[4]) const;
  Bistable f_;
  double delta_max_ = 0.0;
  double ddelta_ = 0.0;
  std::vector<WaveProfile> profiles_;
};

}  // namespace sac
