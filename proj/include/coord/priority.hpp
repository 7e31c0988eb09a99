#pragma once

#include "coord/cross_section.hpp"
#include "coord/types.hpp"

#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace coord {

/// Orientation of conflicting robot pairs: an edge (i, j) means robot i
/// traverses the shared conflict before robot j. At most one orientation per
/// pair; no self edges.
class PriorityGraph {
 public:
  void add_edge(RobotId leader, RobotId follower);
  bool has_edge(RobotId leader, RobotId follower) const;
  bool has_pair(RobotId a, RobotId b) const;
  const std::vector<RobotId>& leaders_of(RobotId follower) const;
  void remove_robot(RobotId id);

  std::vector<std::pair<RobotId, RobotId>> edges() const;
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

 private:
  std::set<std::pair<RobotId, RobotId>> edges_;
  std::map<RobotId, std::vector<RobotId>> incoming_;
};

/// Per-robot exit thresholds, aligned with the system's robot order. Goal
/// membership is the closed conjunction x_i >= threshold_i.
struct GoalRegion {
  std::vector<double> thresholds;
};

bool in_goal(const Configuration& x, const GoalRegion& goal);

/// Orients every conflicting pair by testing the trajectory samples against
/// both priority-shifted regions; pairs free of both are unconstrained and
/// get no edge. Throws std::runtime_error when samples enter both regions
/// (such a trajectory is not collision-free).
PriorityGraph induced_priority_graph(std::span<const Configuration> samples,
                                     std::span<const RobotId> ids, std::span<const int> paths,
                                     const SectionCatalog& catalog);

}  // namespace coord
