#pragma once

#include "coord/geometry.hpp"
#include "coord/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace coord {

enum class SectionKind : std::uint8_t { Empty, Ellipse, Strip, Grid };

/// The 2-D footprint of one robot pair's collision cylinder, in the plane of
/// their curvilinear coordinates (u = first path, v = second path). The set
/// is open. Crossing straight paths yield a bounded ellipse, identical or
/// same-direction parallel lanes an unbounded strip; anything else falls back
/// to a conservative cell grid (every truly colliding configuration lies in a
/// marked cell).
struct CrossSection {
  SectionKind kind = SectionKind::Empty;
  int path_first = -1;
  int path_second = -1;

  // ellipse: u^2 - 2k uv + v^2 + bu u + bv v + c < 0, with |k| < 1
  double k = 0.0, bu = 0.0, bv = 0.0, c = 0.0;

  // strip: |u - v - offset| < half_width
  double offset = 0.0, half_width = 0.0;

  // grid: square cells of size `cell` anchored at coordinate 0
  double cell = 0.0;
  int nu = 0, nv = 0;
  std::vector<std::uint8_t> marked;   // nu x nv, u-major

  // coordinate extents (infinite on strips)
  double inf_u = 0.0, sup_u = 0.0, inf_v = 0.0, sup_v = 0.0;

  bool empty() const { return kind == SectionKind::Empty; }
  bool bounded() const { return kind == SectionKind::Ellipse || kind == SectionKind::Grid; }
  bool contains(double u, double v) const;
  CrossSection transposed() const;
};

CrossSection build_cross_section(const PathGeometry& path_u, const PathGeometry& path_v,
                                 double r_sum, double grid_resolution);

/// Monotone bound for the priority direction (first axis leads): W(x_follow)
/// is the supremum of leader coordinates u such that some (u, v) lies in the
/// cross-section with v <= x_follow, absent when no such v exists. A
/// configuration lies in the priority-shifted obstacle region iff
/// x_leader < W(x_follower).
class ShiftBound {
 public:
  explicit ShiftBound(const CrossSection& section);

  std::optional<double> value(double x_follower) const;
  double leader_sup() const { return sup_u_; }
  double follower_inf() const { return inf_v_; }

 private:
  SectionKind kind_;
  double k_ = 0.0, bu_ = 0.0, bv_ = 0.0, c_ = 0.0;
  double inf_v_ = 0.0, sup_u_ = 0.0, v_peak_ = 0.0;
  double offset_ = 0.0, half_width_ = 0.0;
  double cell_ = 0.0;
  std::vector<double> running_;   // grid: running leader sup per follower column
};

/// Index pair into a Configuration; `leader` has priority over `follower`.
struct DirectedPair {
  int leader = -1;
  int follower = -1;
};

bool in_shifted_obstacle(double x_leader, double x_follower, const ShiftBound& bound);
bool in_shifted_obstacle(const Configuration& x, DirectedPair pair, const ShiftBound& bound);

/// True iff any sample lies in the shifted region described by `bound`.
/// Samples must be coordinate-wise nondecreasing in time (robots never move
/// backwards); violating that is a contract error. With a bound built from a
/// section inflated by 2 * v_max * sample_spacing the test is conservative
/// for the continuous curve.
bool curve_intersects_shifted(std::span<const Configuration> samples, DirectedPair pair,
                              const ShiftBound& bound);

/// Cross-sections and shift bounds for every ordered path pair of a layout,
/// for a common robot radius. Bounds come in two flavors: exact, and built
/// from sections inflated by `inflation` for conservative sampled curve
/// tests. Immutable after construction.
class SectionCatalog {
 public:
  SectionCatalog(const IntersectionLayout& layout, double robot_radius,
                 double inflation, double grid_resolution);

  int path_count() const { return n_; }
  double robot_radius() const { return radius_; }
  double inflation() const { return inflation_; }

  /// nullptr when the two paths never conflict. Axes are (path_u, path_v).
  const CrossSection* section(int path_u, int path_v) const;
  const ShiftBound* bound(int leader_path, int follower_path) const;
  const ShiftBound* inflated_bound(int leader_path, int follower_path) const;
  bool conflicting(int path_a, int path_b) const { return section(path_a, path_b) != nullptr; }

 private:
  std::size_t idx(int a, int b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b);
  }

  int n_ = 0;
  double radius_ = 0.0;
  double inflation_ = 0.0;
  std::vector<std::optional<CrossSection>> sections_;
  std::vector<std::optional<ShiftBound>> bounds_;
  std::vector<std::optional<ShiftBound>> inflated_bounds_;
};

/// Checks that every bounded conflict zone lies strictly between spawn and
/// exit on both involved lanes and that paths continue past the exit by at
/// least `overshoot`. Throws std::invalid_argument on violation.
void validate_layout(const IntersectionLayout& layout, const SectionCatalog& catalog,
                     double overshoot);

}  // namespace coord
