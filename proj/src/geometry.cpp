#include "sac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace sac {

namespace {

double segment_length(const Segment& s) { return norm(s.b - s.a); }

double point_segment_dist(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return norm(p - a);
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

// edge key: orientation (0 horizontal, 1 vertical) + lattice position
using EdgeKey = std::tuple<int, int, int>;

struct RawSegment {
  EdgeKey e0, e1;
  Vec2 p0, p1;
};

Vec2 edge_point(const Grid2D& g, const EdgeKey& k, double frac) {
  const auto [orient, i, j] = k;
  if (orient == 0) return {g.x(i) + frac * g.h, g.y(j)};
  return {g.x(i), g.y(j) + frac * g.h};
}

}  // namespace

double LevelSet::total_length() const {
  double s = 0.0;
  for (const auto& seg : segments) s += segment_length(seg);
  return s;
}

std::size_t LevelSet::polyline_edge_count() const {
  std::size_t n = 0;
  for (const auto& l : loops) n += l.size();  // closed: one edge per vertex
  for (const auto& c : chains) n += c.size() - 1;
  return n;
}

LevelSet extract_level_set(const Field2D& field, double level) {
  LevelSet out;
  out.level = level;
  const auto& g = field.grid;

  // crossing fraction on an edge from value va (at the key node) to vb
  auto frac = [&](double va, double vb) { return (level - va) / (vb - va); };

  std::vector<RawSegment> raw;
  for (int j = 0; j + 1 < g.ny; ++j) {
    for (int i = 0; i + 1 < g.nx; ++i) {
      const double v00 = field.at(i, j), v10 = field.at(i + 1, j);
      const double v11 = field.at(i + 1, j + 1), v01 = field.at(i, j + 1);
      const int code = (v00 > level ? 1 : 0) | (v10 > level ? 2 : 0) | (v11 > level ? 4 : 0) |
                       (v01 > level ? 8 : 0);
      if (code == 0 || code == 15) continue;

      const EdgeKey bottom{0, i, j}, top{0, i, j + 1}, left{1, i, j}, right{1, i + 1, j};
      const double fb = frac(v00, v10), ft = frac(v01, v11);
      const double fl = frac(v00, v01), fr = frac(v10, v11);
      auto add = [&](EdgeKey e0, double f0, EdgeKey e1, double f1) {
        raw.push_back({e0, e1, edge_point(g, e0, f0), edge_point(g, e1, f1)});
      };

      switch (code) {
        case 1: case 14: add(bottom, fb, left, fl); break;
        case 2: case 13: add(bottom, fb, right, fr); break;
        case 4: case 11: add(right, fr, top, ft); break;
        case 8: case 7: add(top, ft, left, fl); break;
        case 3: case 12: add(left, fl, right, fr); break;
        case 6: case 9: add(bottom, fb, top, ft); break;
        case 5: case 10: {
          // saddle: connect by the sign of the cell average
          const double avg = 0.25 * (v00 + v10 + v11 + v01);
          const bool avg_pos = avg > level;
          const bool corners_pos = (code == 5);  // v00, v11 above
          if (avg_pos == corners_pos) {
            add(bottom, fb, right, fr);
            add(top, ft, left, fl);
          } else {
            add(bottom, fb, left, fl);
            add(right, fr, top, ft);
          }
          break;
        }
        default: break;
      }
    }
  }

  out.segments.reserve(raw.size());
  for (const auto& r : raw) out.segments.push_back({r.p0, r.p1});
  if (raw.empty()) return out;

  // stitch segments into polylines via shared edge keys
  std::map<EdgeKey, std::vector<std::size_t>> by_edge;
  for (std::size_t s = 0; s < raw.size(); ++s) {
    by_edge[raw[s].e0].push_back(s);
    by_edge[raw[s].e1].push_back(s);
  }
  std::vector<bool> used(raw.size(), false);
  for (std::size_t s0 = 0; s0 < raw.size(); ++s0) {
    if (used[s0]) continue;
    used[s0] = true;
    std::vector<Vec2> pts{raw[s0].p0, raw[s0].p1};
    std::vector<EdgeKey> keys{raw[s0].e0, raw[s0].e1};
    // grow forward from the back key, then backward from the front key
    for (int dir = 0; dir < 2; ++dir) {
      for (;;) {
        const EdgeKey& tip = (dir == 0) ? keys.back() : keys.front();
        const auto& cands = by_edge[tip];
        std::size_t next = raw.size();
        for (std::size_t c : cands)
          if (!used[c]) next = c;
        if (next == raw.size()) break;
        used[next] = true;
        const bool fwd_match = (raw[next].e0 == tip);
        const EdgeKey new_key = fwd_match ? raw[next].e1 : raw[next].e0;
        const Vec2 new_pt = fwd_match ? raw[next].p1 : raw[next].p0;
        if (dir == 0) {
          keys.push_back(new_key);
          pts.push_back(new_pt);
        } else {
          keys.insert(keys.begin(), new_key);
          pts.insert(pts.begin(), new_pt);
        }
      }
    }
    if (keys.front() == keys.back() && pts.size() > 2) {
      pts.pop_back();  // closure implicit
      out.loops.push_back(std::move(pts));
    } else {
      out.chains.push_back(std::move(pts));
    }
  }
  return out;
}

namespace {

// uniform bins over the segment set for near-constant-time distance queries
class SegmentBins {
public:
  explicit SegmentBins(const std::vector<Segment>& segs) : segs_(segs) {
    lo_ = {1e300, 1e300};
    Vec2 hi{-1e300, -1e300};
    double total = 0.0;
    for (const auto& s : segs) {
      lo_.x = std::min({lo_.x, s.a.x, s.b.x});
      lo_.y = std::min({lo_.y, s.a.y, s.b.y});
      hi.x = std::max({hi.x, s.a.x, s.b.x});
      hi.y = std::max({hi.y, s.a.y, s.b.y});
      total += segment_length(s);
    }
    bin_ = std::max(1e-12, 2.0 * total / static_cast<double>(segs.size() + 1));
    nx_ = static_cast<int>((hi.x - lo_.x) / bin_) + 1;
    ny_ = static_cast<int>((hi.y - lo_.y) / bin_) + 1;
    nx_ = std::clamp(nx_, 1, 2048);
    ny_ = std::clamp(ny_, 1, 2048);
    bin_ = std::max({bin_, (hi.x - lo_.x) / nx_ + 1e-300, (hi.y - lo_.y) / ny_ + 1e-300});
    cells_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (std::size_t s = 0; s < segs.size(); ++s) {
      const auto [i0, j0] = locate(segs[s].a);
      const auto [i1, j1] = locate(segs[s].b);
      for (int j = std::min(j0, j1); j <= std::max(j0, j1); ++j)
        for (int i = std::min(i0, i1); i <= std::max(i0, i1); ++i)
          cells_[static_cast<std::size_t>(j) * nx_ + i].push_back(s);
    }
  }

  double distance(Vec2 p) const {
    const auto [pi, pj] = locate(p);
    double best = 1e300;
    for (int ring = 0;; ++ring) {
      bool any_cell = false;
      for (int j = pj - ring; j <= pj + ring; ++j) {
        for (int i = pi - ring; i <= pi + ring; ++i) {
          if (std::max(std::abs(i - pi), std::abs(j - pj)) != ring) continue;
          if (i < 0 || i >= nx_ || j < 0 || j >= ny_) continue;
          any_cell = true;
          for (std::size_t s : cells_[static_cast<std::size_t>(j) * nx_ + i])
            best = std::min(best, point_segment_dist(p, segs_[s].a, segs_[s].b));
        }
      }
      // a hit at ring r guarantees the true minimum within r+2 rings
      const double ring_floor = (ring - 1) * bin_;
      if (best < 1e300 && best <= ring_floor) break;
      if (!any_cell && ring > nx_ + ny_) break;
    }
    return best;
  }

private:
  std::pair<int, int> locate(Vec2 p) const {
    int i = static_cast<int>((p.x - lo_.x) / bin_);
    int j = static_cast<int>((p.y - lo_.y) / bin_);
    return {std::clamp(i, 0, nx_ - 1), std::clamp(j, 0, ny_ - 1)};
  }
  const std::vector<Segment>& segs_;
  Vec2 lo_;
  double bin_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<std::size_t>> cells_;
};

}  // namespace

SignedDistanceField signed_distance(const LevelSet& target, const Grid2D& grid,
                                    const Field2D& sign_source) {
  if (target.empty()) raise(errc::empty_level_set, "signed_distance needs a non-empty level set");
  SignedDistanceField out;
  out.grid = grid;
  out.d.resize(grid.size());
  const SegmentBins bins(target.segments);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const double dist = bins.distance({grid.x(i), grid.y(j)});
      const double sgn = (sign_source.at(i, j) > target.level) ? 1.0 : -1.0;
      out.d[grid.index(i, j)] = sgn * dist;
    }
  return out;
}

double distance_to(const LevelSet& target, Vec2 p) {
  if (target.empty()) raise(errc::empty_level_set, "distance_to needs a non-empty level set");
  double best = 1e300;
  for (const auto& s : target.segments)
    best = std::min(best, point_segment_dist(p, s.a, s.b));
  return best;
}

WidthReport layer_width(const Field2D& field, double eta, const LevelSet& ls, const Bistable& f) {
  if (ls.empty()) raise(errc::empty_level_set, "layer_width needs a non-empty level set");
  const double eta0 = f.eta0();
  if (!(eta > 0.0) || !(eta < eta0)) raise(errc::bad_config, "eta must lie in (0, eta_0)");
  const auto& g = field.grid;
  const double lo_band = f.a_minus + eta, hi_band = f.a_plus - eta;
  const double step = g.h / 4.0;
  const double s_max = 64.0 * g.h;

  auto grad_dir = [&](Vec2 p) {
    const double d = g.h;
    Vec2 grad{(field.sample(p.x + d, p.y) - field.sample(p.x - d, p.y)) / (2 * d),
              (field.sample(p.x, p.y + d) - field.sample(p.x, p.y - d)) / (2 * d)};
    const double n = norm(grad);
    return (n > 0) ? Vec2{grad.x / n, grad.y / n} : Vec2{1.0, 0.0};
  };

  WidthReport rep;
  // sample the interface every ~4h of arclength
  double pending = 0.0;
  for (const auto& seg : ls.segments) {
    pending += segment_length(seg);
    if (pending < 4.0 * g.h) continue;
    pending = 0.0;
    const Vec2 p = 0.5 * (seg.a + seg.b);
    const Vec2 n = grad_dir(p);
    double up = s_max, down = s_max;
    double prev = field.sample(p.x, p.y);
    for (double s = step; s <= s_max; s += step) {
      const double v = field.sample(p.x + s * n.x, p.y + s * n.y);
      if (v >= hi_band) {
        up = s - step * (v - hi_band) / (v - prev);
        break;
      }
      prev = v;
    }
    prev = field.sample(p.x, p.y);
    for (double s = step; s <= s_max; s += step) {
      const double v = field.sample(p.x - s * n.x, p.y - s * n.y);
      if (v <= lo_band) {
        down = s - step * (lo_band - v) / (prev - v);
        break;
      }
      prev = v;
    }
    rep.max_normal_width = std::max(rep.max_normal_width, up + down);
  }

  std::size_t in_band = 0;
  for (double v : field.u)
    if (v >= lo_band && v <= hi_band) ++in_band;
  rep.area_proxy = static_cast<double>(in_band) * g.h * g.h / ls.total_length();
  return rep;
}

double hausdorff(const LevelSet& a, const LevelSet& b, double resample) {
  if (a.empty() || b.empty()) raise(errc::empty_level_set, "hausdorff needs non-empty sets");
  if (resample <= 0.0) {
    double min_len = 1e300;
    for (const auto& s : a.segments) min_len = std::min(min_len, segment_length(s));
    for (const auto& s : b.segments) min_len = std::min(min_len, segment_length(s));
    resample = std::max(1e-9, 0.5 * min_len);
  }
  auto one_sided = [&](const LevelSet& from, const LevelSet& to) {
    const SegmentBins bins(to.segments);
    double worst = 0.0;
    for (const auto& s : from.segments) {
      const double len = segment_length(s);
      const int n = std::max(1, static_cast<int>(len / resample));
      for (int k = 0; k <= n; ++k) {
        const Vec2 p = s.a + (static_cast<double>(k) / n) * (s.b - s.a);
        worst = std::max(worst, bins.distance(p));
      }
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

double l2_step_distance(const Field2D& field, const LevelSet& reference, const Bistable& f) {
  if (reference.empty()) raise(errc::empty_level_set, "l2_step_distance needs a reference curve");
  if (!reference.chains.empty())
    raise(errc::open_curve, "reference curve must consist of closed loops");
  const auto& g = field.grid;

  // scanline parity fill: nodes with an odd crossing count to the left are
  // inside (value a_-)
  double acc = 0.0;
  std::vector<double> xs;
  for (int j = 0; j < g.ny; ++j) {
    const double y = g.y(j);
    xs.clear();
    for (const auto& loop : reference.loops) {
      const std::size_t n = loop.size();
      for (std::size_t k = 0; k < n; ++k) {
        const Vec2& p = loop[k];
        const Vec2& q = loop[(k + 1) % n];
        if ((p.y > y) == (q.y > y)) continue;
        xs.push_back(p.x + (y - p.y) / (q.y - p.y) * (q.x - p.x));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (int i = 0; i < g.nx; ++i) {
      const double x = g.x(i);
      const auto crossings =
          static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
      const double phi = (crossings % 2 == 1) ? f.a_minus : f.a_plus;
      const double diff = field.at(i, j) - phi;
      // trapezoid weights on the boundary nodes
      const double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
      const double wy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
      acc += wx * wy * diff * diff;
    }
  }
  return std::sqrt(acc * g.h * g.h);
}

double mean_loop_radius(const LevelSet& ls, Vec2* centroid_out) {
  if (ls.loops.empty()) raise(errc::empty_level_set, "no closed loop to measure");
  const auto& loop = ls.loops.front();
  Vec2 c{0, 0};
  for (const auto& p : loop) c = c + p;
  c = (1.0 / static_cast<double>(loop.size())) * c;
  double r = 0.0;
  for (const auto& p : loop) r += norm(p - c);
  r /= static_cast<double>(loop.size());
  if (centroid_out) *centroid_out = c;
  return r;
}

}  // namespace sac
