#pragma once

#include "coord/types.hpp"

#include <vector>

namespace coord {

/// Box constraints for a double-integrator robot: velocity in [0, v_max]
/// and acceleration in [a_min, a_max] with a_min < 0 < a_max.
struct KinodynamicModel {
  double v_max = 1.0;
  double a_max = 0.05;
  double a_min = -0.05;
};

struct RobotState {
  double x = 0.0;   // curvilinear position
  double v = 0.0;   // velocity, in [0, v_max]
};

/// State after decelerating at a_min for time t, holding position once
/// stopped. This is the minimal (braking) trajectory.
RobotState braking_state(const RobotState& s, const KinodynamicModel& m, double t);

/// State after accelerating at a_max for time t, cruising once v_max is
/// reached. This is the maximal (accelerating) trajectory.
RobotState max_state(const RobotState& s, const KinodynamicModel& m, double t);

double stopping_time(const RobotState& s, const KinodynamicModel& m);
double stopping_distance(const RobotState& s, const KinodynamicModel& m);

/// Earliest time at which the maximal trajectory reaches the target
/// coordinate; 0 when already there or past.
double time_to_reach(const RobotState& s, const KinodynamicModel& m, double target);

struct Robot {
  RobotId id = 0;
  int path = -1;   // index into the layout's paths
  RobotState state;
  KinodynamicModel model;
};

struct SystemState {
  std::vector<Robot> robots;

  int index_of(RobotId id) const;   // -1 when absent
  bool contains(RobotId id) const { return index_of(id) >= 0; }
  std::size_t size() const { return robots.size(); }
  bool empty() const { return robots.empty(); }
};

/// Projection of the system state onto positions.
Configuration position_vector(const SystemState& s);

/// True iff both states hold the same robots on the same paths with positions
/// and velocities equal within tol.
bool states_identical(const SystemState& a, const SystemState& b, double tol);

}  // namespace coord
