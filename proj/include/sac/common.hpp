#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace sac {

enum class errc {
  no_sign_change,
  not_bistable,
  shift_too_large,
  step_too_large,
  insufficient_support,
  blow_up,
  empty_level_set,
  open_curve,
  self_intersection,
  collapse,
  convexity_lost,
  non_convex_segment,
  negative_variance_estimate,
  out_of_calibrated_range,
  delta_out_of_range,
  no_valid_sigma,
  side_condition_fail,
  misaligned_times,
  no_connection,
  unbalanced_nonlinearity,
  bad_config,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

}  // namespace sac
