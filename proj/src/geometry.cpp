#include "coord/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace coord {

namespace {

std::vector<double> cumulative_arc(const std::vector<Vec2>& pts) {
  if (pts.size() < 2)
    throw std::invalid_argument("path needs at least two points");
  std::vector<double> arc(pts.size(), 0.0);
  for (std::size_t k = 1; k < pts.size(); ++k) {
    const double seg = (pts[k] - pts[k - 1]).norm();
    if (seg <= 0.0)
      throw std::invalid_argument("consecutive path points must be distinct");
    arc[k] = arc[k - 1] + seg;
  }
  return arc;
}

}  // namespace

PathGeometry PathGeometry::segment(int id, const Vec2& a, const Vec2& b) {
  return polyline(id, {a, b});
}

PathGeometry PathGeometry::polyline(int id, std::vector<Vec2> pts) {
  PathGeometry p;
  p.id = id;
  p.arc = cumulative_arc(pts);
  p.points = std::move(pts);
  return p;
}

Vec2 PathGeometry::direction() const {
  return (points[1] - points[0]).normalized();
}

Vec2 point_at(const PathGeometry& path, double s) {
  constexpr double kSlack = 1e-9;
  if (!(s >= -kSlack && s <= path.length() + kSlack))
    throw std::domain_error("point_at: coordinate outside [0, length]");
  s = std::clamp(s, 0.0, path.length());
  auto it = std::upper_bound(path.arc.begin(), path.arc.end(), s);
  std::size_t k = static_cast<std::size_t>(it - path.arc.begin());
  if (k == 0) k = 1;
  if (k >= path.arc.size()) k = path.arc.size() - 1;
  const double t = (s - path.arc[k - 1]) / (path.arc[k] - path.arc[k - 1]);
  return path.points[k - 1] + t * (path.points[k] - path.points[k - 1]);
}

bool pair_collision(const PathGeometry& path_i, double x_i, double r_i,
                    const PathGeometry& path_j, double x_j, double r_j) {
  return (point_at(path_i, x_i) - point_at(path_j, x_j)).norm() < r_i + r_j;
}

IntersectionLayout make_crossroads_layout(double radius, double lane_offset,
                                          double spawn_margin, double exit_margin,
                                          double tail_margin) {
  const double conflict_reach = 2.0 * radius;
  const double d = lane_offset;
  const double approach = conflict_reach + spawn_margin;
  const double exit_arc = approach + d + conflict_reach + exit_margin;
  const double len = exit_arc + tail_margin;

  IntersectionLayout layout;
  auto add = [&](const Vec2& start, const Vec2& dir) {
    const int id = layout.lane_count();
    layout.paths.push_back(PathGeometry::segment(id, start, start + len * dir));
    layout.spawn.push_back(0.0);
    layout.exit.push_back(exit_arc);
  };
  add({-approach, 0.0}, {1.0, 0.0});     // eastbound at y = 0
  add({d + approach, d}, {-1.0, 0.0});   // westbound at y = d
  add({0.0, -approach}, {0.0, 1.0});     // northbound at x = 0
  add({d, d + approach}, {0.0, -1.0});   // southbound at x = d
  return layout;
}

}  // namespace coord
