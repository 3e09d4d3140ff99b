#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sac/common.hpp"
#include "sac/noise.hpp"
#include "sac/reaction.hpp"

namespace sac {

struct Grid2D {
  int nx = 0, ny = 0;
  double h = 0.0;
  double x0 = 0.0, y0 = 0.0;

  double x(int i) const { return x0 + h * i; }
  double y(int j) const { return y0 + h * j; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }

  // unit square with n x n nodes
  static Grid2D unit_square(int n);
};

struct Field2D {
  Grid2D grid;
  std::vector<double> u;
  double time = 0.0;

  double& at(int i, int j) { return u[grid.index(i, j)]; }
  double at(int i, int j) const { return u[grid.index(i, j)]; }
  // bilinear interpolation, clamped to the grid
  double sample(double x, double y) const;
};

struct FieldRadial {
  int nr = 0;
  double r_max = 0.0;
  std::vector<double> u;
  double time = 0.0;

  double h() const { return r_max / (nr - 1); }
  double sample(double r) const;
};

struct SimConfig {
  double eps = 0.0;
  const Bistable* f = nullptr;
  const MildNoisePath* noise = nullptr;  // null: deterministic run
  double dt = 0.0;                       // 0: choose the admissible cap
  double t_end = 0.0;
  std::vector<double> snapshot_times;
  std::uint64_t seed = 0;

  static double admissible_dt(double h, double eps, const Bistable& f);
};

// 5-point mirror-Neumann stencil.
Field2D laplacian_neumann(const Field2D& phi);

// One forward-Euler step, noise evaluated at the step midpoint.
void step_ac(Field2D& state, const SimConfig& cfg);
void step_ac_radial(FieldRadial& state, const SimConfig& cfg);

struct Trajectory {
  std::vector<Field2D> snapshots;
  long step_count = 0;
  double dt = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t noise_checksum = 0;
  std::string manifest_json() const;
  double eps = 0.0;
  std::uint64_t seed = 0;
};

struct TrajectoryRadial {
  std::vector<FieldRadial> snapshots;
  long step_count = 0;
  double dt = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t noise_checksum = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
};

Trajectory run_simulation(const SimConfig& cfg, const Field2D& u0);
TrajectoryRadial run_simulation_radial(const SimConfig& cfg, const FieldRadial& u0);

// Initial data generators; the minus phase sits inside the interface.
Field2D ic_circle(const Grid2D& g, const Bistable& f, Vec2 center, double radius, double width);
Field2D ic_ellipse(const Grid2D& g, const Bistable& f, Vec2 center, double ax, double ay,
                   double width);
Field2D ic_planar(const Grid2D& g, const Bistable& f, double x_cross, double width);
Field2D ic_constant(const Grid2D& g, double value);
Field2D ic_from_csv(const Grid2D& g, const std::string& path);
FieldRadial ic_circle_radial(int nr, double r_max, const Bistable& f, double radius, double width);

void write_snapshot_csv(const Field2D& field, const std::string& path);

}  // namespace sac
