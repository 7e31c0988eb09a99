#include "coord/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

namespace coord {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t run_seed(std::uint64_t seed, double density_percent) {
  const auto density_key = static_cast<std::uint64_t>(std::llround(density_percent * 1e6));
  return splitmix64(seed ^ splitmix64(density_key));
}

std::optional<Robot> gate_spawn(int lane, const SystemState& current, const PriorityGraph& graph,
                                const SectionCatalog& catalog, const IntersectionLayout& layout,
                                const KinodynamicModel& model, const PlannerConfig& cfg,
                                RobotId next_id) {
  Robot candidate;
  candidate.id = next_id;
  candidate.path = lane;
  candidate.state = {layout.spawn[static_cast<std::size_t>(lane)], model.v_max};
  candidate.model = model;

  SystemState grown = current;
  grown.robots.push_back(candidate);
  PriorityGraph extended = graph;
  extend_priorities(extended, candidate.id, grown, catalog);
  if (check_initial(grown, extended, catalog, cfg)) return std::nullopt;
  return candidate;
}

struct PairMonitor {
  bool violated = false;      // entered the assigned direction's shifted region
  bool constrained = false;   // entered the reverse region (the pair actually bound)
};

using MonitorMap = std::map<std::pair<RobotId, RobotId>, PairMonitor>;

void classify_monitor(const PairMonitor& pm, RunMetrics& m) {
  if (pm.violated) {
    ++m.priority_mismatches;
    if (pm.constrained) ++m.inconsistent_pairs;
  } else if (pm.constrained) {
    ++m.pairs_constrained;
  } else {
    ++m.pairs_unconstrained;
  }
}

void finalize_monitors_for(RobotId id, MonitorMap& monitors, RunMetrics& m) {
  for (auto it = monitors.begin(); it != monitors.end();) {
    if (it->first.first == id || it->first.second == id) {
      classify_monitor(it->second, m);
      it = monitors.erase(it);
    } else {
      ++it;
    }
  }
}

RobotState advance(const Robot& r, Action a, double t) {
  return a == Action::Brake ? braking_state(r.state, r.model, t)
                            : max_state(r.state, r.model, t);
}

// Tracks, per assigned edge, whether the executed motion entered either
// shifted region of the pair. Exact (uninflated) bounds.
void update_monitors(const SystemState& state, const Decision& decision,
                     const PriorityGraph& graph, const SectionCatalog& catalog, double dt,
                     double fine_step, MonitorMap& monitors) {
  struct Ref {
    PairMonitor* pm;
    int li, fi;
    const ShiftBound* fwd;
    const ShiftBound* rev;
  };
  std::vector<Ref> refs;
  for (const auto& [leader_id, follower_id] : graph.edges()) {
    const int li = state.index_of(leader_id);
    const int fi = state.index_of(follower_id);
    if (li < 0 || fi < 0)
      throw std::invalid_argument("monitor: priority graph references an absent robot");
    const int lp = state.robots[static_cast<std::size_t>(li)].path;
    const int fp = state.robots[static_cast<std::size_t>(fi)].path;
    PairMonitor& pm = monitors[{leader_id, follower_id}];
    refs.push_back({&pm, li, fi, catalog.bound(lp, fp), catalog.bound(fp, lp)});
  }
  if (refs.empty()) return;

  const int n = static_cast<int>(state.size());
  const int m = static_cast<int>(std::ceil(dt / fine_step - 1e-12));
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int k = 0; k <= m; ++k) {
    const double t = std::min(k * fine_step, dt);
    for (int r = 0; r < n; ++r)
      x[static_cast<std::size_t>(r)] =
          advance(state.robots[static_cast<std::size_t>(r)],
                  decision[static_cast<std::size_t>(r)], t).x;
    for (const Ref& ref : refs) {
      if (ref.fwd)
        ref.pm->violated =
            ref.pm->violated || in_shifted_obstacle(x[static_cast<std::size_t>(ref.li)],
                                                    x[static_cast<std::size_t>(ref.fi)], *ref.fwd);
      if (ref.rev)
        ref.pm->constrained =
            ref.pm->constrained ||
            in_shifted_obstacle(x[static_cast<std::size_t>(ref.fi)],
                                x[static_cast<std::size_t>(ref.li)], *ref.rev);
    }
  }
}

long ideal_travel_steps(const Robot& r, const ScenarioConfig& cfg) {
  const double t =
      time_to_reach(r.state, r.model, cfg.layout.exit[static_cast<std::size_t>(r.path)]);
  return std::max<long>(1, static_cast<long>(std::ceil(t / cfg.dt - 1e-9)));
}

}  // namespace

PlannerConfig ScenarioConfig::planner_config() const {
  PlannerConfig p = PlannerConfig::with_defaults(model.v_max, dt, subdivisions);
  p.max_steps = max_steps;
  return p;
}

void ScenarioConfig::validate() const {
  if (layout.lane_count() == 0) throw std::invalid_argument("scenario: no paths");
  if (layout.spawn.size() != layout.paths.size() || layout.exit.size() != layout.paths.size())
    throw std::invalid_argument("scenario: spawn/exit arrays must match the path count");
  if (!(radius > 0.0)) throw std::invalid_argument("scenario: radius must be positive");
  if (!(model.v_max > 0.0)) throw std::invalid_argument("scenario: v_max must be positive");
  if (!(model.a_max > 0.0)) throw std::invalid_argument("scenario: a_max must be positive");
  if (!(model.a_min < 0.0)) throw std::invalid_argument("scenario: a_min must be negative");
  if (!(dt > 0.0)) throw std::invalid_argument("scenario: dt must be positive");
  if (subdivisions < 1) throw std::invalid_argument("scenario: subdivisions must be at least 1");
  if (verify_subdivisions < 1)
    throw std::invalid_argument("scenario: verify_subdivisions must be at least 1");
  if (!(grid_resolution > 0.0))
    throw std::invalid_argument("scenario: grid_resolution must be positive");
  if (max_steps <= 0) throw std::invalid_argument("scenario: max_steps must be positive");
  if (horizon <= 0) throw std::invalid_argument("scenario: horizon must be positive");
  if (robots_per_run <= 0)
    throw std::invalid_argument("scenario: robots_per_run must be positive");
  if (densities.empty()) throw std::invalid_argument("scenario: no densities to sweep");
  if (seeds.empty()) throw std::invalid_argument("scenario: no seeds");
  auto check_density = [](double d) {
    if (!(d > 0.0 && d <= 100.0))
      throw std::invalid_argument("scenario: density must lie in (0, 100]");
  };
  for (double d : densities) check_density(d);
  check_density(density);
  for (std::size_t p = 0; p < layout.paths.size(); ++p)
    if (!(layout.spawn[p] < layout.exit[p]))
      throw std::invalid_argument("scenario: spawn must precede exit on every lane");
}

double spawn_probability(double density_percent, double v_max, double dt, double radius) {
  return (density_percent / 100.0) * (v_max * dt) / (2.0 * radius);
}

SpawnOutcome spawn_process(double density_percent, int lane, std::mt19937_64& rng,
                           const SystemState& current, const PriorityGraph& graph,
                           const SectionCatalog& catalog, const IntersectionLayout& layout,
                           const KinodynamicModel& model, const PlannerConfig& cfg,
                           RobotId next_id) {
  SpawnOutcome out;
  const double p = spawn_probability(density_percent, model.v_max, cfg.dt, catalog.robot_radius());
  if (uniform01(rng) >= p) return out;
  out.drawn = true;
  out.robot = gate_spawn(lane, current, graph, catalog, layout, model, cfg, next_id);
  return out;
}

RunResult run_scenario(const ScenarioConfig& cfg, double density_percent, std::uint64_t seed,
                       bool verify) {
  cfg.validate();
  if (!(density_percent > 0.0 && density_percent <= 100.0))
    throw std::invalid_argument("density must lie in (0, 100]");
  const PlannerConfig pcfg = cfg.planner_config();
  const SectionCatalog catalog(cfg.layout, cfg.radius, pcfg.inflation, cfg.grid_resolution);
  validate_layout(cfg.layout, catalog, cfg.model.v_max * cfg.dt);

  const int lanes = cfg.layout.lane_count();
  const double fine_step = pcfg.sub_step / cfg.verify_subdivisions;

  RunResult out;
  RunMetrics& m = out.metrics;
  m.density_requested = density_percent;
  m.seed = seed;
  m.verified = verify;

  std::mt19937_64 rng(run_seed(seed, density_percent));
  SystemState state;
  PriorityGraph graph;
  MonitorMap monitors;
  std::map<RobotId, RobotRecord> active;
  RobotId next_id = 0;
  long spawn_window = 0;

  long k = 0;
  while (k < cfg.horizon) {
    const bool spawning = m.spawned < cfg.robots_per_run;
    if (spawning) {
      spawn_window = k + 1;
      for (int lane = 0; lane < lanes && m.spawned < cfg.robots_per_run; ++lane) {
        const SpawnOutcome oc = spawn_process(density_percent, lane, rng, state, graph, catalog,
                                              cfg.layout, cfg.model, pcfg, next_id);
        if (!oc.drawn) continue;
        if (!oc.robot) {
          // gated away; the arrival is lost and shows up in the achieved
          // density, not as a queued burst later
          ++m.deferrals;
          continue;
        }
        state.robots.push_back(*oc.robot);
        extend_priorities(graph, oc.robot->id, state, catalog);
        RobotRecord rec;
        rec.id = oc.robot->id;
        rec.lane = lane;
        rec.spawn_step = k;
        rec.ideal_steps = ideal_travel_steps(*oc.robot, cfg);
        active[rec.id] = rec;
        ++m.spawned;
        ++next_id;
      }
    }

    if (state.empty()) {
      ++k;
      if (!spawning) break;   // drained
      continue;
    }

    auto [next, decision] = step(state, graph, catalog, pcfg);

    for (std::size_t r = 0; r < state.size(); ++r)
      out.trace.push_back({k, state.robots[r].id, state.robots[r].path, state.robots[r].state.x,
                           state.robots[r].state.v, decision[r]});

    if (verify) {
      if (check_initial(next, graph, catalog, pcfg)) ++m.invariant_failures;
      if (sample_interval_collision(state, decision, pcfg.dt, fine_step, cfg.layout, cfg.radius))
        ++m.collisions;
      update_monitors(state, decision, graph, catalog, pcfg.dt, fine_step, monitors);
    }

    const bool frozen = detect_deadlock(state, next, false);
    if (frozen && !m.deadlock) {
      m.deadlock = true;
      m.deadlock_step = k;
    }

    state = std::move(next);
    ++k;

    for (std::size_t r = 0; r < state.size();) {
      const Robot& rb = state.robots[r];
      if (rb.state.x >= cfg.layout.exit[static_cast<std::size_t>(rb.path)]) {
        RobotRecord rec = active.at(rb.id);
        rec.exit_step = k;
        const long travel = rec.exit_step - rec.spawn_step;
        rec.increase_percent =
            100.0 * static_cast<double>(travel - rec.ideal_steps) /
            static_cast<double>(rec.ideal_steps);
        m.robots.push_back(rec);
        active.erase(rb.id);
        finalize_monitors_for(rb.id, monitors, m);
        graph.remove_robot(rb.id);
        state.robots.erase(state.robots.begin() + static_cast<std::ptrdiff_t>(r));
      } else {
        ++r;
      }
    }

    // a frozen state with spawning finished repeats forever
    if (frozen && !spawning) break;
  }
  m.steps = k;

  for (const auto& [key, pm] : monitors) classify_monitor(pm, m);
  monitors.clear();

  m.completed = static_cast<long>(m.robots.size());
  double sum = 0.0;
  for (const RobotRecord& rec : m.robots) {
    sum += rec.increase_percent;
    m.max_increase = std::max(m.max_increase, rec.increase_percent);
  }
  if (m.completed > 0) m.mean_increase = sum / static_cast<double>(m.completed);

  if (m.spawned > 0 && spawn_window > 0) {
    const double rate = static_cast<double>(m.spawned) /
                        (static_cast<double>(lanes) * static_cast<double>(spawn_window));
    const double max_rate = cfg.model.v_max * cfg.dt / (2.0 * cfg.radius);
    m.density_achieved = 100.0 * rate / max_rate;
  }
  return out;
}

ReplayReport replay_check(const std::vector<TraceRow>& trace, const ScenarioConfig& cfg) {
  cfg.validate();
  const PlannerConfig pcfg = cfg.planner_config();
  const SectionCatalog catalog(cfg.layout, cfg.radius, pcfg.inflation, cfg.grid_resolution);
  validate_layout(cfg.layout, catalog, cfg.model.v_max * cfg.dt);
  const double fine_step = pcfg.sub_step / cfg.verify_subdivisions;

  ReplayReport rep;
  rep.rows = static_cast<long>(trace.size());
  if (trace.empty()) return rep;

  std::vector<std::pair<long, std::vector<TraceRow>>> steps;
  for (const TraceRow& row : trace) {
    if (row.lane < 0 || row.lane >= cfg.layout.lane_count())
      throw std::invalid_argument("trace: lane index outside the scenario layout");
    if (steps.empty() || steps.back().first != row.step) {
      if (!steps.empty() && row.step <= steps.back().first)
        throw std::invalid_argument("trace: steps must be strictly increasing");
      steps.emplace_back(row.step, std::vector<TraceRow>{});
    }
    auto& bucket = steps.back().second;
    if (!bucket.empty() && row.id <= bucket.back().id)
      throw std::invalid_argument("trace: ids must be strictly increasing within a step");
    bucket.push_back(row);
  }
  rep.steps = static_cast<long>(steps.size());

  RunMetrics scratch;
  SystemState state;
  Decision decision;
  long state_step = 0;
  PriorityGraph graph;
  MonitorMap monitors;

  auto note = [&](long& counter, const std::string& msg) {
    ++counter;
    if (rep.first_error.empty()) rep.first_error = msg;
  };

  for (const auto& [stepno, rows] : steps) {
    std::map<RobotId, RobotState> survivors;
    if (!state.empty()) {
      if (sample_interval_collision(state, decision, pcfg.dt, fine_step, cfg.layout, cfg.radius))
        note(rep.collisions, "collision during step " + std::to_string(state_step));
      update_monitors(state, decision, graph, catalog, pcfg.dt, fine_step, monitors);

      for (std::size_t r = 0; r < state.size(); ++r) {
        const Robot& rb = state.robots[r];
        const RobotState moved = advance(rb, decision[r], pcfg.dt);
        if (moved.x >= cfg.layout.exit[static_cast<std::size_t>(rb.path)]) {
          finalize_monitors_for(rb.id, monitors, scratch);
          graph.remove_robot(rb.id);
        } else {
          survivors[rb.id] = moved;
        }
      }
      if (!survivors.empty() && stepno != state_step + 1)
        throw std::invalid_argument("trace: missing rows for robots still in the intersection");
    }

    SystemState snap;
    Decision dnew;
    std::vector<RobotId> fresh;
    for (const TraceRow& row : rows) {
      const auto it = survivors.find(row.id);
      if (it != survivors.end()) {
        const int prev_index = state.index_of(row.id);
        if (state.robots[static_cast<std::size_t>(prev_index)].path != row.lane)
          throw std::invalid_argument("trace: robot changed lanes");
        if (std::abs(it->second.x - row.x) > 1e-9 || std::abs(it->second.v - row.v) > 1e-9)
          note(rep.consistency_errors,
               "state of robot " + std::to_string(row.id) + " at step " +
                   std::to_string(stepno) + " does not follow from its decision");
        survivors.erase(it);
      } else {
        const double spawn_x = cfg.layout.spawn[static_cast<std::size_t>(row.lane)];
        if (std::abs(row.x - spawn_x) > 1e-9 || std::abs(row.v - cfg.model.v_max) > 1e-9)
          note(rep.consistency_errors,
               "robot " + std::to_string(row.id) + " enters away from the spawn state");
        fresh.push_back(row.id);
      }
      Robot rb;
      rb.id = row.id;
      rb.path = row.lane;
      rb.state = {row.x, row.v};
      rb.model = cfg.model;
      snap.robots.push_back(rb);
      dnew.push_back(row.action);
    }
    if (!survivors.empty())
      throw std::invalid_argument("trace: robot disappeared before reaching its exit");

    for (RobotId id : fresh) extend_priorities(graph, id, snap, catalog);

    state = std::move(snap);
    decision = std::move(dnew);
    state_step = stepno;
  }

  // the last recorded step was executed too
  if (!state.empty()) {
    if (sample_interval_collision(state, decision, pcfg.dt, fine_step, cfg.layout, cfg.radius))
      note(rep.collisions, "collision during step " + std::to_string(state_step));
    update_monitors(state, decision, graph, catalog, pcfg.dt, fine_step, monitors);
  }
  for (const auto& [key, pm] : monitors) classify_monitor(pm, scratch);
  rep.priority_mismatches = scratch.priority_mismatches;
  if (rep.priority_mismatches > 0 && rep.first_error.empty())
    rep.first_error = "a robot entered a shifted region guarded by an assigned priority";
  return rep;
}

}  // namespace coord
