#pragma once

#include "coord/geometry.hpp"
#include "coord/planner.hpp"

#include <optional>

namespace coord {

struct CollisionEvent {
  double time = 0.0;
  RobotId a = 0;
  RobotId b = 0;
};

/// Geometric collision check of one executed step: the motion of every robot
/// over [0, dt] is re-derived from its decided extremal trajectory, sampled
/// at fine_step, and tested pairwise with plain Euclidean footprint overlap.
/// Deliberately bypasses the coordination-space machinery.
std::optional<CollisionEvent> sample_interval_collision(const SystemState& start,
                                                        const Decision& decision, double dt,
                                                        double fine_step,
                                                        const IntersectionLayout& layout,
                                                        double radius);

/// Applies sample_interval_collision to every step of a trajectory; reports
/// the first violation or nullopt.
std::optional<CollisionEvent> trajectory_collision_free(const Trajectory& traj,
                                                        const IntersectionLayout& layout,
                                                        double radius, double fine_step);

/// The inductive safety invariant: the braking trajectory from s is free of
/// every assigned priority's shifted region.
bool braking_invariant_holds(const SystemState& s, const PriorityGraph& graph,
                             const SectionCatalog& catalog, const PlannerConfig& cfg);

/// Definitional membership oracle for the shifted region: searches shifts
/// a, b >= 0 on a grid for a colliding (x_leader + a, x_follower - b). The
/// section's axes must be (leader, follower). Unbounded strips are searched
/// over a caller-provided window.
bool brute_force_shifted_membership(double x_leader, double x_follower,
                                    const CrossSection& section, double grid_step,
                                    double strip_window = 0.0);

/// Reference trajectory for robots that start and stop instantly: each step,
/// every robot advances v_max * dt unless the swept configuration would enter
/// a guarding shifted region (exact bounds, frozen co-robots). Used only as a
/// comparison oracle.
Trajectory left_greedy_trajectory(const SystemState& initial, const PriorityGraph& graph,
                                  const SectionCatalog& catalog, const GoalRegion& goal,
                                  double dt, long max_steps);

}  // namespace coord
