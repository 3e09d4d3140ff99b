#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "sac/field.hpp"
#include "sac/noise.hpp"
#include "sac/wave.hpp"

namespace sac {

// Constants of the sub/supersolution construction.
struct SandwichParams {
  double b = 0.0;      // margin band width
  double rho = 0.0;    // spectral margin of f' near a+-
  double a1 = 0.0;     // min m_z over the middle band
  double beta = 0.0;   // rho / 4
  double sigma0 = 0.0, sigma1 = 0.0, sigma2 = 0.0;
  double sigma = 0.0;  // min of the three
  double K = 0.0;
  double L = 0.0;      // smallest power of 2 passing the residual probe
  double d0 = 0.0;     // distance-smoothing band
  double eps0 = 0.0;
  double T_horizon = 0.0;
  bool ep0M_ok = false;  // eps0^2 L e^{L T} <= 1
  bool ga_ok = false;    // e^{L T} + K <= d0 / (2 eps0)
  double probe_min_residual = 0.0;
  double probe_budget = 0.0;
};

// Raw signed distance to the reference flow at (x, t); the pair applies the
// d0-band smoothing internally.
using DistanceFn = std::function<double(Vec2, double)>;

SandwichParams compute_params(const Bistable& f, const WaveFamily& family, double T_horizon,
                              double eps0, double K, double d0 = 0.15, double delta_scan = 0.0,
                              bool enforce_side_conditions = true);

class SubSuperPair {
public:
  SubSuperPair(SandwichParams params, double eps, const WaveFamily* family,
               const WaveSpeed* speed, DistanceFn dist, const MildNoisePath* noise);

  double p(double t) const;
  double q(double t) const;
  double xi(double t) const { return noise_ ? noise_->xi(t) : 0.0; }
  double xi_dot(double t) const { return noise_ ? noise_->xi_dot(t) : 0.0; }
  double d_smooth(Vec2 x, double t) const;  // phi(d~), flat outside |d| > 2 d0
  std::pair<double, double> eval(Vec2 x, double t) const;
  double eval_upper(Vec2 x, double t) const;
  double eval_lower(Vec2 x, double t) const;

  const SandwichParams& params() const { return params_; }
  double eps() const { return eps_; }
  const WaveFamily& family() const { return *family_; }
  const WaveSpeed& speed() const { return *speed_; }

  // diagnostic error terms of the residual decomposition at one probe
  struct ErrorTerms {
    double e2 = 0.0;  // (1 - |grad d|^2) m_zz / eps^2
    double e3 = 0.0;  // (d_t - lap d + c(eps xi)/eps) m_z / eps
    double e4 = 0.0;  // eps xi_dot m_delta
  };
  ErrorTerms error_terms(Vec2 x, double t, double hx, double ht) const;

private:
  double stretched(Vec2 x, double t, double sign) const;
  SandwichParams params_;
  double eps_;
  const WaveFamily* family_;
  const WaveSpeed* speed_;
  DistanceFn dist_;
  const MildNoisePath* noise_;
};

struct ResidualReport {
  double min_residual_upper = 0.0;  // min over probes of L u+ (want >= -budget)
  double max_residual_lower = 0.0;  // max over probes of L u- (want <= +budget)
  double budget = 0.0;              // max local discretization budget
  long n_probes = 0;
  bool pass = false;
};

// Numerical L u at the probe set; centered time differences and the 5-point
// Laplacian at probe resolution, budget by local Richardson refinement.
ResidualReport residual_check(const SubSuperPair& pair, const std::vector<Vec2>& xs,
                              const std::vector<double>& ts, double hx = 0.0, double ht = 0.0);

struct SandwichReport {
  long violations = 0;
  double worst_margin = 0.0;  // min over nodes of min(u - u^-, u^+ - u)
  long nodes_checked = 0;
  long snapshots_checked = 0;
};

// Ordering check u^-(t - t0) <= u(t) <= u^+(t - t0) over snapshots at t >= t0.
SandwichReport sandwich_check(const std::vector<Field2D>& snapshots, const SubSuperPair& pair,
                              double t0, double slack);

}  // namespace sac
