#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sac/common.hpp"
#include "sac/numerics.hpp"

namespace sac {

// Normalized smooth bump exp(-1/(1-x^2)) on (-1,1) with tabulated antiderivatives.
namespace mollifier {
double rho(double x);
double rho_prime(double x);
double cdf(double x);           // R(x) = \int_{-1}^x rho
double cdf_integral(double x);  // Q(x) = \int_{-1}^x R
double peak();                  // rho(0)
}  // namespace mollifier

// Sampled two-sided Brownian path, W(0) = 0, piecewise linear between samples.
// Negative times come from an independent increment stream.
struct BrownianPath {
  double t0 = 0.0;   // leftmost grid time (<= 0)
  double dt = 0.0;
  std::vector<double> w;
  std::uint64_t seed = 0;

  double t_min() const { return t0; }
  double t_max() const { return t0 + dt * (static_cast<double>(w.size()) - 1); }
  double operator()(double t) const;

  static BrownianPath sample(double t_neg, double t_pos, double dt, std::uint64_t seed);
};

// W^e(t) = (rho^e * W)(t) sampled on [0, t_max]; values carry the exact
// derivative xi^e(t) so the series integrates consistently.
HermiteSeries mollify(const BrownianPath& w, double eps, double gamma2, double t_max,
                      double sample_dt);

// Clipped, mollified Ornstein-Uhlenbeck surrogate of the stationary mixing
// base process: xi = rho_w * clip(Y, +-M), bounded with bounded derivative.
struct StationaryBase {
  double ou_rate = 1.0;
  double stat_std = 1.0;
  double clip_level = 1.0;       // M
  double mollifier_width = 0.1;  // |xi_dot| <= M / mollifier_width
  std::uint64_t seed = 0;
  double horizon = 0.0;

  HermiteSeries xi_series;      // sampled xi with stored xi_dot
  HermiteSeries xi_dot_series;  // sampled xi_dot (derivative by differences)

  double xi(double t) const { return xi_series.value(t); }
  double xi_dot(double t) const { return xi_dot_series.value(t); }

  static StationaryBase sample(double ou_rate, double stat_std, double clip_level,
                               double mollifier_width, double horizon, std::uint64_t seed);
};

// A realization of the mild noise xi^e(t) on [0, t_max].
class MildNoisePath {
public:
  enum class Kind { mn1, mn2 };

  Kind kind = Kind::mn2;
  double eps = 0.0;
  double gamma = 0.0;  // gamma_1 or gamma_2
  std::uint64_t seed = 0;
  double t_max = 0.0;

  std::shared_ptr<const BrownianPath> brownian;  // mn2
  std::shared_ptr<const StationaryBase> base;    // mn1

  double xi(double t) const;
  double xi_dot(double t) const;

  // deterministic envelopes (mn1 only; mn2 bounds are statistical)
  double xi_bound() const;
  double xi_dot_bound() const;

  // Corollary-style option: subtract xi(0) faded out over the first
  // correlation time, so that xi(0) = 0 exactly.
  void enable_zero_at_origin();

  std::uint64_t checksum() const;
  void write_csv(const std::string& path) const;
  void write_sidecar_json(const std::string& path) const;

  const HermiteSeries& samples() const { return xi_series_; }

  friend MildNoisePath mn2_noise(std::shared_ptr<const BrownianPath> w, double eps, double gamma2,
                                 double t_max, double sample_dt);
  friend MildNoisePath mn1_noise(std::shared_ptr<const StationaryBase> base, double eps,
                                 double gamma1, double t_max);

private:
  HermiteSeries xi_series_;      // mn2: sampled xi with exact xi_dot
  HermiteSeries xi_dot_series_;  // mn2: sampled xi_dot
  double xi0_offset_ = 0.0;
  double t_cut_ = 0.0;
  bool zero_at_origin_ = false;
};

MildNoisePath mn2_noise(std::shared_ptr<const BrownianPath> w, double eps, double gamma2,
                        double t_max, double sample_dt = 0.0);
MildNoisePath mn1_noise(std::shared_ptr<const StationaryBase> base, double eps, double gamma1,
                        double t_max);

// alpha_0 = sqrt(2 \int_0^{horizon} E[xi_0 xi_t] dt) estimated over n_paths
// fresh realizations of the base parameters; throws NegativeVarianceEstimate.
double alpha0(const StationaryBase& proto, int n_paths, double horizon,
              double* stderr_out = nullptr);

}  // namespace sac
