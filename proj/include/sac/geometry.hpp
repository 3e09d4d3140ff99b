#pragma once

#include <optional>
#include <vector>

#include "sac/field.hpp"

namespace sac {

struct Segment {
  Vec2 a, b;
};

// Marching-squares output: raw segments plus reconstructed polylines. Loops
// are closed (first point repeats implicitly), chains end on the domain edge.
struct LevelSet {
  double level = 0.0;
  std::vector<Segment> segments;
  std::vector<std::vector<Vec2>> loops;
  std::vector<std::vector<Vec2>> chains;

  bool empty() const { return segments.empty(); }
  double total_length() const;
  std::size_t polyline_edge_count() const;
};

LevelSet extract_level_set(const Field2D& field, double level);

struct SignedDistanceField {
  Grid2D grid;
  std::vector<double> d;
  double at(int i, int j) const { return d[grid.index(i, j)]; }
};

// Exact point-to-segment distance (bin-accelerated), sign from the field.
SignedDistanceField signed_distance(const LevelSet& target, const Grid2D& grid,
                                    const Field2D& sign_source);

// Distance from one point to the level set (unsigned).
double distance_to(const LevelSet& target, Vec2 p);

struct WidthReport {
  double max_normal_width = 0.0;  // max transition extent along local normals
  double area_proxy = 0.0;        // area{a_-+eta <= u <= a_+-eta} / length
};

WidthReport layer_width(const Field2D& field, double eta, const LevelSet& ls, const Bistable& f);

double hausdorff(const LevelSet& a, const LevelSet& b, double resample = 0.0);

// || u - Phi ||_{L^2}, Phi the step function with a_- inside the curve.
double l2_step_distance(const Field2D& field, const LevelSet& reference, const Bistable& f);

// Mean distance of loop vertices to their centroid (circle benchmarks).
double mean_loop_radius(const LevelSet& ls, Vec2* centroid_out = nullptr);

}  // namespace sac
