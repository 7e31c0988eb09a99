#include "coord/policy.hpp"

#include <stdexcept>

namespace coord {

namespace {

struct Orientation {
  bool make_edge = false;
  RobotId leader = 0;
  RobotId follower = 0;
};

Orientation orient(const Robot& a, const Robot& b, const SectionCatalog& catalog) {
  if (a.path == b.path) {
    const bool a_front = a.state.x > b.state.x || (a.state.x == b.state.x && a.id < b.id);
    return {true, a_front ? a.id : b.id, a_front ? b.id : a.id};
  }
  const CrossSection* s = catalog.section(a.path, b.path);
  if (!s) return {};

  const bool a_past = s->bounded() && a.state.x >= s->sup_u;
  const bool b_past = s->bounded() && b.state.x >= s->sup_v;
  if (a_past && b_past) return {};   // conflict already moot for both
  if (a_past) return {true, a.id, b.id};
  if (b_past) return {true, b.id, a.id};

  const double arrival_a = time_to_reach(a.state, a.model, s->inf_u);
  const double arrival_b = time_to_reach(b.state, b.model, s->inf_v);
  const bool a_first = arrival_a < arrival_b || (arrival_a == arrival_b && a.id < b.id);
  return {true, a_first ? a.id : b.id, a_first ? b.id : a.id};
}

}  // namespace

PriorityGraph assign_priorities(const SystemState& s, const SectionCatalog& catalog) {
  PriorityGraph g;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Orientation o = orient(s.robots[i], s.robots[j], catalog);
      if (o.make_edge) g.add_edge(o.leader, o.follower);
    }
  }
  return g;
}

void extend_priorities(PriorityGraph& graph, RobotId new_robot, const SystemState& s,
                       const SectionCatalog& catalog) {
  const int ni = s.index_of(new_robot);
  if (ni < 0) throw std::invalid_argument("extend_priorities: new robot not in the state");
  const Robot& fresh = s.robots[static_cast<std::size_t>(ni)];
  for (const Robot& other : s.robots) {
    if (other.id == new_robot) continue;
    const Orientation o = orient(other, fresh, catalog);
    if (o.make_edge) graph.add_edge(o.leader, o.follower);
  }
}

}  // namespace coord
