#include "coord/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coord {

std::optional<CollisionEvent> sample_interval_collision(const SystemState& start,
                                                        const Decision& decision, double dt,
                                                        double fine_step,
                                                        const IntersectionLayout& layout,
                                                        double radius) {
  if (fine_step <= 0.0) throw std::invalid_argument("fine_step must be positive");
  if (decision.size() != start.size())
    throw std::invalid_argument("decision size must match the robot count");

  const int n = static_cast<int>(start.size());
  const int m = static_cast<int>(std::ceil(dt / fine_step - 1e-12));
  std::vector<Vec2> pos(static_cast<std::size_t>(n));
  for (int k = 0; k <= m; ++k) {
    const double t = std::min(k * fine_step, dt);
    for (int r = 0; r < n; ++r) {
      const Robot& rb = start.robots[static_cast<std::size_t>(r)];
      const RobotState moved = decision[static_cast<std::size_t>(r)] == Action::Brake
                                   ? braking_state(rb.state, rb.model, t)
                                   : max_state(rb.state, rb.model, t);
      pos[static_cast<std::size_t>(r)] =
          point_at(layout.paths[static_cast<std::size_t>(rb.path)], moved.x);
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if ((pos[static_cast<std::size_t>(i)] - pos[static_cast<std::size_t>(j)]).norm() <
            2.0 * radius)
          return CollisionEvent{t, start.robots[static_cast<std::size_t>(i)].id,
                                start.robots[static_cast<std::size_t>(j)].id};
  }
  return std::nullopt;
}

std::optional<CollisionEvent> trajectory_collision_free(const Trajectory& traj,
                                                        const IntersectionLayout& layout,
                                                        double radius, double fine_step) {
  for (std::size_t k = 0; k < traj.step_count(); ++k) {
    auto event =
        sample_interval_collision(traj.states[k], traj.decisions[k], traj.dt, fine_step, layout,
                                  radius);
    if (event) {
      event->time += static_cast<double>(k) * traj.dt;
      return event;
    }
  }
  return std::nullopt;
}

bool braking_invariant_holds(const SystemState& s, const PriorityGraph& graph,
                             const SectionCatalog& catalog, const PlannerConfig& cfg) {
  return !check_initial(s, graph, catalog, cfg).has_value();
}

bool brute_force_shifted_membership(double x_leader, double x_follower,
                                    const CrossSection& section, double grid_step,
                                    double strip_window) {
  if (section.empty()) return false;
  if (grid_step <= 0.0) throw std::invalid_argument("grid_step must be positive");

  double max_a, max_b;
  if (section.bounded()) {
    max_a = section.sup_u - x_leader;
    max_b = x_follower - section.inf_v;
  } else {
    if (strip_window <= 0.0)
      throw std::invalid_argument("unbounded section needs a positive search window");
    max_a = strip_window;
    max_b = strip_window;
  }
  if (max_a < 0.0 || max_b < 0.0) {
    // shifts can only grow the leader coordinate / shrink the follower's, so
    // nothing to search past the section
    max_a = std::max(max_a, 0.0);
    max_b = std::max(max_b, 0.0);
  }
  const long na = static_cast<long>(std::floor(max_a / grid_step));
  const long nb = static_cast<long>(std::floor(max_b / grid_step));
  for (long ia = 0; ia <= na; ++ia)
    for (long ib = 0; ib <= nb; ++ib)
      if (section.contains(x_leader + ia * grid_step, x_follower - ib * grid_step)) return true;
  return false;
}

Trajectory left_greedy_trajectory(const SystemState& initial, const PriorityGraph& graph,
                                  const SectionCatalog& catalog, const GoalRegion& goal,
                                  double dt, long max_steps) {
  if (goal.thresholds.size() != initial.size())
    throw std::invalid_argument("left_greedy_trajectory: goal size mismatch");

  constexpr int kSweepSamples = 128;
  Trajectory traj;
  traj.dt = dt;
  SystemState current = initial;
  for (Robot& r : current.robots) r.state.v = 0.0;   // velocities carry no meaning here
  traj.states.push_back(current);

  const int n = static_cast<int>(current.size());
  while (!in_goal(position_vector(current), goal) &&
         static_cast<long>(traj.step_count()) < max_steps) {
    const Configuration q = position_vector(current);
    Decision d(static_cast<std::size_t>(n), Action::Accelerate);
    bool moved = false;
    SystemState next = current;
    for (int i = 0; i < n; ++i) {
      const Robot& me = current.robots[static_cast<std::size_t>(i)];
      const double stride = me.model.v_max * dt;
      bool blocked = false;
      for (RobotId leader_id : graph.leaders_of(me.id)) {
        const int li = current.index_of(leader_id);
        if (li < 0) throw std::invalid_argument("left_greedy: graph references an absent robot");
        const ShiftBound* w =
            catalog.bound(current.robots[static_cast<std::size_t>(li)].path, me.path);
        if (!w) continue;
        for (int ks = 0; ks <= kSweepSamples; ++ks) {
          const double xi = me.state.x + stride * ks / kSweepSamples;
          if (in_shifted_obstacle(q[li], xi, *w)) {
            blocked = true;
            break;
          }
        }
        if (blocked) break;
      }
      if (blocked) {
        d[static_cast<std::size_t>(i)] = Action::Brake;
      } else {
        next.robots[static_cast<std::size_t>(i)].state.x += stride;
        moved = true;
      }
    }
    if (!moved) break;   // blocked forever under these priorities
    traj.states.push_back(next);
    traj.decisions.push_back(std::move(d));
    current = std::move(next);
  }
  return traj;
}

}  // namespace coord
