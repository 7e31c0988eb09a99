#include "coord/priority.hpp"

#include <algorithm>
#include <stdexcept>

namespace coord {

void PriorityGraph::add_edge(RobotId leader, RobotId follower) {
  if (leader == follower) throw std::invalid_argument("priority graph: self edge");
  if (edges_.count({follower, leader}))
    throw std::invalid_argument("priority graph: pair already oriented the other way");
  if (edges_.insert({leader, follower}).second) incoming_[follower].push_back(leader);
}

bool PriorityGraph::has_edge(RobotId leader, RobotId follower) const {
  return edges_.count({leader, follower}) != 0;
}

bool PriorityGraph::has_pair(RobotId a, RobotId b) const {
  return has_edge(a, b) || has_edge(b, a);
}

const std::vector<RobotId>& PriorityGraph::leaders_of(RobotId follower) const {
  static const std::vector<RobotId> kNone;
  const auto it = incoming_.find(follower);
  return it == incoming_.end() ? kNone : it->second;
}

void PriorityGraph::remove_robot(RobotId id) {
  for (auto it = edges_.begin(); it != edges_.end();) {
    if (it->first == id || it->second == id)
      it = edges_.erase(it);
    else
      ++it;
  }
  incoming_.erase(id);
  for (auto& [follower, leaders] : incoming_)
    leaders.erase(std::remove(leaders.begin(), leaders.end(), id), leaders.end());
}

std::vector<std::pair<RobotId, RobotId>> PriorityGraph::edges() const {
  return {edges_.begin(), edges_.end()};
}

bool in_goal(const Configuration& x, const GoalRegion& goal) {
  if (static_cast<std::size_t>(x.size()) != goal.thresholds.size())
    throw std::invalid_argument("in_goal: configuration and goal sizes differ");
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] < goal.thresholds[static_cast<std::size_t>(i)]) return false;
  return true;
}

PriorityGraph induced_priority_graph(std::span<const Configuration> samples,
                                     std::span<const RobotId> ids, std::span<const int> paths,
                                     const SectionCatalog& catalog) {
  if (ids.size() != paths.size())
    throw std::invalid_argument("induced_priority_graph: ids and paths sizes differ");
  const int n = static_cast<int>(ids.size());
  PriorityGraph g;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!catalog.conflicting(paths[i], paths[j])) continue;
      const ShiftBound* w_ij = catalog.bound(paths[i], paths[j]);
      const ShiftBound* w_ji = catalog.bound(paths[j], paths[i]);
      bool entered_ij = false;   // samples met the region shifted for i over j
      bool entered_ji = false;
      for (const Configuration& q : samples) {
        entered_ij = entered_ij || in_shifted_obstacle(q[i], q[j], *w_ij);
        entered_ji = entered_ji || in_shifted_obstacle(q[j], q[i], *w_ji);
        if (entered_ij && entered_ji) break;
      }
      if (entered_ij && entered_ji)
        throw std::runtime_error(
            "induced_priority_graph: trajectory enters both shifted regions of a pair");
      if (entered_ij)
        g.add_edge(ids[j], ids[i]);
      else if (entered_ji)
        g.add_edge(ids[i], ids[j]);
    }
  }
  return g;
}

}  // namespace coord
