#pragma once

#include "coord/planner.hpp"
#include "coord/policy.hpp"
#include "coord/verify.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace coord {

struct ScenarioConfig {
  std::string name = "scenario";
  IntersectionLayout layout;
  double radius = 1.0;
  KinodynamicModel model;

  double dt = 1.0;
  int subdivisions = 4;          // virtual-path sampling: sub_step = dt / subdivisions
  int verify_subdivisions = 4;   // checker sampling: sub_step / verify_subdivisions
  double grid_resolution = 0.1;
  long max_steps = 1000000;

  std::vector<double> densities = {1.0, 2.0, 5.0, 10.0};
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  int robots_per_run = 500;
  long horizon = 200000;

  // single-run settings (cmd run)
  double density = 10.0;
  std::uint64_t seed = 1;

  PlannerConfig planner_config() const;
  void validate() const;
};

struct RobotRecord {
  RobotId id = 0;
  int lane = -1;
  long spawn_step = -1;
  long exit_step = -1;
  long ideal_steps = 0;
  double increase_percent = 0.0;
};

struct RunMetrics {
  double density_requested = 0.0;
  double density_achieved = 0.0;
  std::uint64_t seed = 0;
  long steps = 0;
  long spawned = 0;
  long completed = 0;
  long deferrals = 0;
  bool deadlock = false;
  long deadlock_step = -1;
  bool verified = false;
  long collisions = 0;
  long invariant_failures = 0;
  long priority_mismatches = 0;
  long inconsistent_pairs = 0;
  long pairs_constrained = 0;
  long pairs_unconstrained = 0;
  double mean_increase = 0.0;
  double max_increase = 0.0;
  std::vector<RobotRecord> robots;
};

struct TraceRow {
  long step = 0;
  RobotId id = 0;
  int lane = 0;
  double x = 0.0;
  double v = 0.0;
  Action action = Action::Accelerate;
};

struct RunResult {
  std::vector<TraceRow> trace;
  RunMetrics metrics;
};

/// Requested spawn probability per lane per step; density 100 means a
/// continuous flow of robots spaced one diameter apart at full speed.
double spawn_probability(double density_percent, double v_max, double dt, double radius);

struct SpawnOutcome {
  bool drawn = false;               // Bernoulli trial fired this step
  std::optional<Robot> robot;       // empty when the safety gate deferred it
};

/// One per-lane-per-step spawn attempt: a Bernoulli trial at the density's
/// rate; on success the robot enters at the lane's spawn coordinate at full
/// speed only if the braking trajectory of the grown system, under the
/// incrementally extended priorities, stays safe.
SpawnOutcome spawn_process(double density_percent, int lane, std::mt19937_64& rng,
                           const SystemState& current, const PriorityGraph& graph,
                           const SectionCatalog& catalog, const IntersectionLayout& layout,
                           const KinodynamicModel& model, const PlannerConfig& cfg,
                           RobotId next_id);

/// Executes one seeded traffic run at the given density: spawn, extend
/// priorities, plan one step, retire robots past their exit, until the spawn
/// target is met and the intersection drains (or the horizon is hit). With
/// verify set, every step is checked read-only: braking invariant, geometric
/// collision sampling, and priority-respect monitoring; the trajectory bytes
/// are identical either way.
RunResult run_scenario(const ScenarioConfig& cfg, double density_percent, std::uint64_t seed,
                       bool verify);

struct ReplayReport {
  long rows = 0;
  long steps = 0;
  long consistency_errors = 0;
  long collisions = 0;
  long priority_mismatches = 0;
  std::string first_error;

  bool ok() const {
    return consistency_errors == 0 && collisions == 0 && priority_mismatches == 0;
  }
};

/// Offline re-verification of a written trace against its scenario: state
/// consistency under the recorded decisions, geometric collision sampling,
/// and priority respect with the priorities re-derived by the assignment
/// policy. Throws std::invalid_argument on schema mismatches.
ReplayReport replay_check(const std::vector<TraceRow>& trace, const ScenarioConfig& cfg);

}  // namespace coord
