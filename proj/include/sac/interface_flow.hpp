#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sac/common.hpp"
#include "sac/noise.hpp"
#include "sac/wave.hpp"

namespace sac {

// Strictly convex curve in the Gauss-map parametrization: kappa(theta) on a
// uniform grid over [0, 2pi).
struct GaussMapCurve {
  std::vector<double> kappa;
  Vec2 base_point{0.0, 0.0};

  double dtheta() const { return 2.0 * 3.14159265358979323846 / kappa.size(); }
  double min_kappa() const;
  double kappa_bar() const;  // max over theta of max(kappa, 1/kappa, |d_theta kappa|)
  Vec2 closure_defect() const;
  double perimeter() const;  // circumference integral of 1/kappa
};

// One Stratonovich-Heun step of kappa_t = kappa^2 kappa_theta_theta + kappa^3
// + c0alpha0 kappa^2 o dW; throws ConvexityLost when positivity fails.
GaussMapCurve step_kappa_spde(const GaussMapCurve& curve, double dt, double c0alpha0, double dW);

// Closed marker-particle curve, counterclockwise orientation.
struct FrontCurve {
  std::vector<Vec2> pts;
  int steps_since_redistribute = 0;

  double enclosed_area() const;           // shoelace, positive for CCW
  double arclength() const;
  double min_spacing() const;
  std::vector<double> curvatures() const;  // signed, 5-point circle fit
  Vec2 inward_normal(std::size_t i) const;
  bool is_simple() const;
  void redistribute();  // resample to uniform arclength

  static FrontCurve circle(Vec2 center, double radius, int n);
};

// x(theta) = x(0) + int (1/kappa)(-sin, cos); closure defect spread linearly.
FrontCurve reconstruct_curve(const GaussMapCurve& curve);

// Markers move by dt * (kappa + forcing) along the inward normal; markers are
// re-spread to uniform arclength every 10 steps (with a simplicity check).
void step_front(FrontCurve& curve, double dt, double forcing);

struct RadiusPath {
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> r;
  bool extinct = false;
  double t_extinct = 0.0;

  double at(double time) const;  // linear interpolation, clamped
};

// dR = -(1/R) dt + (c(eps xi)/eps) dt driven by a mild-noise path.
RadiusPath radius_sde_mild(double r0, const MildNoisePath& noise, const WaveSpeed& speed,
                           double eps, double dt, double t_end);
// dR = -(1/R) dt - coef dW, increments supplied (Ito = Stratonovich here).
RadiusPath radius_sde_white(double r0, double coef, std::span<const double> dw, double dt);
RadiusPath radius_sde_white_seeded(double r0, double coef, double dt, double t_end,
                                   std::uint64_t seed);
// deterministic curvature-only shrink
RadiusPath radius_sde_deterministic(double r0, double dt, double t_end);

struct StoppingMonitor {
  double threshold = 0.0;  // N
  std::vector<double> times;
  std::vector<double> kappa_bar;
  std::vector<double> boundary_dist;
  std::optional<double> triggered_at;
  std::string clause;  // "curvature" or "boundary"
  bool non_convex_flagged = false;
};

// Domain is the unit square. kappa_bar uses d_theta kappa = kappa_s / kappa
// on convex segments; non-convex samples set the flag.
StoppingMonitor monitor_stopping(const std::vector<std::pair<double, FrontCurve>>& history,
                                 double N);
StoppingMonitor monitor_stopping_radius(const RadiusPath& path, Vec2 center, double N);

}  // namespace sac
