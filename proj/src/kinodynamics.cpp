#include "coord/kinodynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace coord {

RobotState braking_state(const RobotState& s, const KinodynamicModel& m, double t) {
  if (t < 0.0) throw std::invalid_argument("braking_state: negative duration");
  const double t_stop = stopping_time(s, m);
  if (t < t_stop)
    return {s.x + s.v * t + 0.5 * m.a_min * t * t, s.v + m.a_min * t};
  return {s.x + stopping_distance(s, m), 0.0};
}

RobotState max_state(const RobotState& s, const KinodynamicModel& m, double t) {
  if (t < 0.0) throw std::invalid_argument("max_state: negative duration");
  const double t_acc = (m.v_max - s.v) / m.a_max;
  if (t < t_acc)
    return {s.x + s.v * t + 0.5 * m.a_max * t * t, s.v + m.a_max * t};
  const double x_acc = s.x + s.v * t_acc + 0.5 * m.a_max * t_acc * t_acc;
  return {x_acc + m.v_max * (t - t_acc), m.v_max};
}

double stopping_time(const RobotState& s, const KinodynamicModel& m) {
  return s.v / -m.a_min;
}

double stopping_distance(const RobotState& s, const KinodynamicModel& m) {
  return s.v * s.v / (2.0 * -m.a_min);
}

double time_to_reach(const RobotState& s, const KinodynamicModel& m, double target) {
  if (s.x >= target) return 0.0;
  const double t_acc = (m.v_max - s.v) / m.a_max;
  const double x_acc = s.x + s.v * t_acc + 0.5 * m.a_max * t_acc * t_acc;
  if (x_acc >= target) {
    const double disc = s.v * s.v + 2.0 * m.a_max * (target - s.x);
    return (std::sqrt(disc) - s.v) / m.a_max;
  }
  return t_acc + (target - x_acc) / m.v_max;
}

int SystemState::index_of(RobotId id) const {
  for (std::size_t k = 0; k < robots.size(); ++k)
    if (robots[k].id == id) return static_cast<int>(k);
  return -1;
}

Configuration position_vector(const SystemState& s) {
  Configuration x(static_cast<Eigen::Index>(s.robots.size()));
  for (std::size_t k = 0; k < s.robots.size(); ++k)
    x[static_cast<Eigen::Index>(k)] = s.robots[k].state.x;
  return x;
}

bool states_identical(const SystemState& a, const SystemState& b, double tol) {
  if (a.robots.size() != b.robots.size()) return false;
  for (std::size_t k = 0; k < a.robots.size(); ++k) {
    const Robot& ra = a.robots[k];
    const Robot& rb = b.robots[k];
    if (ra.id != rb.id || ra.path != rb.path) return false;
    if (std::abs(ra.state.x - rb.state.x) > tol) return false;
    if (std::abs(ra.state.v - rb.state.v) > tol) return false;
  }
  return true;
}

}  // namespace coord
