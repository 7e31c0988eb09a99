#include "coord/planner.hpp"

#include <cmath>
#include <stdexcept>

namespace coord {

namespace {

RobotState advance(const Robot& r, Action a, double t) {
  return a == Action::Brake ? braking_state(r.state, r.model, t)
                            : max_state(r.state, r.model, t);
}

}  // namespace

PlannerConfig PlannerConfig::with_defaults(double v_max, double dt, int subdivisions) {
  if (subdivisions < 1) throw std::invalid_argument("subdivisions must be at least 1");
  PlannerConfig cfg;
  cfg.dt = dt;
  cfg.sub_step = dt / subdivisions;
  cfg.inflation = 2.0 * v_max * cfg.sub_step;
  cfg.validate();
  return cfg;
}

void PlannerConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(sub_step > 0.0 && sub_step <= dt))
    throw std::invalid_argument("sub_step must lie in (0, dt]");
  const double ratio = dt / sub_step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9)
    throw std::invalid_argument("dt must be an integer multiple of sub_step");
  if (inflation < 0.0) throw std::invalid_argument("inflation must be nonnegative");
  if (max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
}

std::vector<Configuration> virtual_path(const SystemState& s, int robot_index,
                                        const PlannerConfig& cfg) {
  const int n = static_cast<int>(s.size());
  const int m1 = static_cast<int>(std::lround(cfg.dt / cfg.sub_step));

  std::vector<Configuration> out;
  Configuration q(n);

  for (int k = 0; k <= m1; ++k) {
    const double t = (k == m1) ? cfg.dt : k * cfg.sub_step;
    for (int r = 0; r < n; ++r)
      q[r] = advance(s.robots[static_cast<std::size_t>(r)],
                     r == robot_index ? Action::Accelerate : Action::Brake, t).x;
    out.push_back(q);
  }

  // from the dt state everybody brakes; after the last sample the system is
  // at rest and the configuration stays there
  std::vector<RobotState> mid(static_cast<std::size_t>(n));
  double rest_time = 0.0;
  for (int r = 0; r < n; ++r) {
    const Robot& rb = s.robots[static_cast<std::size_t>(r)];
    mid[static_cast<std::size_t>(r)] =
        advance(rb, r == robot_index ? Action::Accelerate : Action::Brake, cfg.dt);
    rest_time = std::max(rest_time, stopping_time(mid[static_cast<std::size_t>(r)], rb.model));
  }
  const int m2 = static_cast<int>(std::ceil(rest_time / cfg.sub_step - 1e-12));
  for (int k = 1; k <= m2; ++k) {
    const double t = k * cfg.sub_step;
    for (int r = 0; r < n; ++r)
      q[r] = braking_state(mid[static_cast<std::size_t>(r)],
                           s.robots[static_cast<std::size_t>(r)].model, t).x;
    out.push_back(q);
  }
  return out;
}

Action decide(const SystemState& s, int robot_index, const PriorityGraph& graph,
              const SectionCatalog& catalog, const PlannerConfig& cfg) {
  const Robot& me = s.robots[static_cast<std::size_t>(robot_index)];
  const auto& leaders = graph.leaders_of(me.id);
  if (leaders.empty()) return Action::Accelerate;

  std::vector<Configuration> samples;
  for (RobotId leader_id : leaders) {
    const int li = s.index_of(leader_id);
    if (li < 0)
      throw std::invalid_argument("decide: priority graph references an absent robot");
    const ShiftBound* w =
        catalog.inflated_bound(s.robots[static_cast<std::size_t>(li)].path, me.path);
    if (!w) continue;
    if (samples.empty()) samples = virtual_path(s, robot_index, cfg);
    if (curve_intersects_shifted(samples, {li, robot_index}, *w)) return Action::Brake;
  }
  return Action::Accelerate;
}

std::pair<SystemState, Decision> step(const SystemState& s, const PriorityGraph& graph,
                                      const SectionCatalog& catalog, const PlannerConfig& cfg) {
  const int n = static_cast<int>(s.size());
  Decision d(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) d[static_cast<std::size_t>(r)] = decide(s, r, graph, catalog, cfg);

  SystemState next = s;
  for (int r = 0; r < n; ++r)
    next.robots[static_cast<std::size_t>(r)].state =
        advance(s.robots[static_cast<std::size_t>(r)], d[static_cast<std::size_t>(r)], cfg.dt);
  return {std::move(next), std::move(d)};
}

std::optional<SafetyViolation> check_initial(const SystemState& s, const PriorityGraph& graph,
                                             const SectionCatalog& catalog,
                                             const PlannerConfig& cfg) {
  // The planner steers braking rest points asymptotically onto the inflated
  // region's boundary, where recomposing the braking trajectory across a
  // step perturbs coordinates by a few ulps. The check therefore tests the
  // configuration nudged microscopically toward safety (the monotone-free
  // direction); the nudge is negligible against the inflation margin.
  constexpr double kBoundarySlack = 1e-9;
  struct Edge {
    int leader_index;
    int follower_index;
    const ShiftBound* bound;
    RobotId leader_id;
    RobotId follower_id;
  };
  std::vector<Edge> edges;
  for (const auto& [leader_id, follower_id] : graph.edges()) {
    const int li = s.index_of(leader_id);
    const int fi = s.index_of(follower_id);
    if (li < 0 || fi < 0)
      throw std::invalid_argument("check_initial: priority graph references an absent robot");
    const ShiftBound* w = catalog.inflated_bound(s.robots[static_cast<std::size_t>(li)].path,
                                                 s.robots[static_cast<std::size_t>(fi)].path);
    if (w) edges.push_back({li, fi, w, leader_id, follower_id});
  }
  if (edges.empty()) return std::nullopt;

  const int n = static_cast<int>(s.size());
  double rest_time = 0.0;
  for (const Robot& r : s.robots) rest_time = std::max(rest_time, stopping_time(r.state, r.model));
  const int m = static_cast<int>(std::ceil(rest_time / cfg.sub_step - 1e-12));

  Configuration q(n);
  for (int k = 0; k <= m; ++k) {
    const double t = k * cfg.sub_step;
    for (int r = 0; r < n; ++r)
      q[r] = braking_state(s.robots[static_cast<std::size_t>(r)].state,
                           s.robots[static_cast<std::size_t>(r)].model, t).x;
    for (const Edge& e : edges)
      if (in_shifted_obstacle(q[e.leader_index] + kBoundarySlack,
                              q[e.follower_index] - kBoundarySlack, *e.bound))
        return SafetyViolation{e.leader_id, e.follower_id, t};
  }
  return std::nullopt;
}

bool detect_deadlock(const SystemState& previous, const SystemState& current, bool reached_goal) {
  if (reached_goal) return false;
  if (current.empty()) return false;
  return states_identical(previous, current, 1e-12);
}

const char* to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::Completed: return "completed";
    case PlanStatus::DeadlockDetected: return "deadlock detected";
    case PlanStatus::StepLimitExceeded: return "step limit exceeded";
    case PlanStatus::InitialStateUnsafe: return "initial state unsafe";
  }
  return "unknown";
}

PlanResult plan(const SystemState& initial, const PriorityGraph& graph,
                const SectionCatalog& catalog, const GoalRegion& goal, const PlannerConfig& cfg) {
  cfg.validate();
  if (goal.thresholds.size() != initial.size())
    throw std::invalid_argument("plan: goal thresholds must match the robot count");

  PlanResult result;
  result.trajectory.dt = cfg.dt;
  result.trajectory.states.push_back(initial);

  if (auto violation = check_initial(initial, graph, catalog, cfg)) {
    result.status = PlanStatus::InitialStateUnsafe;
    result.violation = violation;
    return result;
  }

  SystemState current = initial;
  while (!in_goal(position_vector(current), goal)) {
    if (static_cast<long>(result.trajectory.step_count()) >= cfg.max_steps) {
      result.status = PlanStatus::StepLimitExceeded;
      return result;
    }
    auto [next, d] = step(current, graph, catalog, cfg);
    const bool reached = in_goal(position_vector(next), goal);
    if (detect_deadlock(current, next, reached)) {
      result.status = PlanStatus::DeadlockDetected;
      return result;
    }
    result.trajectory.states.push_back(next);
    result.trajectory.decisions.push_back(std::move(d));
    current = std::move(next);
  }
  result.status = PlanStatus::Completed;
  return result;
}

}  // namespace coord
