#pragma once

#include <Eigen/Core>

#include <vector>

namespace coord {

using Vec2 = Eigen::Vector2d;

/// A planar track with arc-length parameterization. Robots travel along the
/// track in the direction of increasing arc length and never move backwards.
struct PathGeometry {
  int id = -1;
  std::vector<Vec2> points;   // vertices; consecutive points are distinct
  std::vector<double> arc;    // cumulative arc length per vertex, arc[0] == 0

  static PathGeometry segment(int id, const Vec2& a, const Vec2& b);
  static PathGeometry polyline(int id, std::vector<Vec2> pts);

  double length() const { return arc.back(); }
  bool is_straight() const { return points.size() == 2; }
  const Vec2& origin() const { return points.front(); }
  Vec2 direction() const;   // unit direction of the first segment
};

/// Point at arc length s along the path. Throws std::domain_error when s is
/// outside [0, length].
Vec2 point_at(const PathGeometry& path, double s);

/// True iff two disc robots at the given curvilinear coordinates overlap.
/// The collision region is open: touching footprints do not collide.
bool pair_collision(const PathGeometry& path_i, double x_i, double r_i,
                    const PathGeometry& path_j, double x_j, double r_j);

struct RobotFootprint {
  double radius = 1.0;
};

struct IntersectionLayout {
  std::vector<PathGeometry> paths;
  std::vector<double> spawn;   // curvilinear spawn coordinate per path
  std::vector<double> exit;    // curvilinear exit coordinate per path

  int lane_count() const { return static_cast<int>(paths.size()); }
};

/// Two-way crossroads: two horizontal lanes in opposite directions separated
/// laterally by lane_offset, crossed by two vertical lanes likewise. Spawn is
/// spawn_margin before the first conflict of each lane, exit is exit_margin
/// after the last one, and each path continues tail_margin past the exit.
IntersectionLayout make_crossroads_layout(double radius, double lane_offset,
                                          double spawn_margin, double exit_margin,
                                          double tail_margin);

}  // namespace coord
