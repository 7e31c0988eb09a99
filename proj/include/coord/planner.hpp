#pragma once

#include "coord/cross_section.hpp"
#include "coord/kinodynamics.hpp"
#include "coord/priority.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace coord {

struct PlannerConfig {
  double dt = 1.0;          // planning time step
  double sub_step = 0.25;   // virtual-path sampling spacing, divides dt
  double inflation = 0.5;   // section inflation covering inter-sample motion
  long max_steps = 1000000;

  static PlannerConfig with_defaults(double v_max, double dt, int subdivisions = 4);
  void validate() const;
};

enum class Action : std::uint8_t { Brake, Accelerate };

/// One action per robot, aligned with the system's robot order.
using Decision = std::vector<Action>;

struct Trajectory {
  double dt = 1.0;
  std::vector<SystemState> states;     // step_count() + 1 entries
  std::vector<Decision> decisions;

  std::size_t step_count() const { return decisions.size(); }
};

/// Sampled configurations of the failsafe probe for one robot: over [0, dt]
/// the robot follows its maximal trajectory while everyone else brakes, then
/// the whole system brakes to rest. The final sample is the rest point.
std::vector<Configuration> virtual_path(const SystemState& s, int robot_index,
                                        const PlannerConfig& cfg);

/// ACCELERATE iff the robot's virtual path stays clear of every incoming
/// priority's shifted region (inflated bounds); BRAKE otherwise. Robots with
/// no incoming edges always accelerate.
Action decide(const SystemState& s, int robot_index, const PriorityGraph& graph,
              const SectionCatalog& catalog, const PlannerConfig& cfg);

/// One planning step: all decisions are computed from the same input state,
/// then every robot advances by dt along its chosen extremal trajectory.
std::pair<SystemState, Decision> step(const SystemState& s, const PriorityGraph& graph,
                                      const SectionCatalog& catalog, const PlannerConfig& cfg);

struct SafetyViolation {
  RobotId leader = 0;
  RobotId follower = 0;
  double time = 0.0;
};

/// Samples the all-brake trajectory from s until every robot is stopped and
/// reports the first sample inside any edge's shifted region (inflated
/// bounds), or nullopt when the braking trajectory is safe.
std::optional<SafetyViolation> check_initial(const SystemState& s, const PriorityGraph& graph,
                                             const SectionCatalog& catalog,
                                             const PlannerConfig& cfg);

/// The step map is deterministic, so a repeated non-goal state repeats
/// forever.
bool detect_deadlock(const SystemState& previous, const SystemState& current, bool reached_goal);

enum class PlanStatus : std::uint8_t {
  Completed,
  DeadlockDetected,
  StepLimitExceeded,
  InitialStateUnsafe,
};

const char* to_string(PlanStatus status);

struct PlanResult {
  PlanStatus status = PlanStatus::Completed;
  Trajectory trajectory;
  std::optional<SafetyViolation> violation;
};

/// Iterates `step` from the initial state until the goal region is reached.
PlanResult plan(const SystemState& initial, const PriorityGraph& graph,
                const SectionCatalog& catalog, const GoalRegion& goal, const PlannerConfig& cfg);

}  // namespace coord
