#pragma once

#include "coord/cross_section.hpp"
#include "coord/kinodynamics.hpp"
#include "coord/priority.hpp"

namespace coord {

/// Maximally aggressive assignment: for every conflicting pair, the robot
/// whose unobstructed maximal trajectory reaches its own edge of the conflict
/// zone first takes priority (ties go to the lower id). Same-lane pairs keep
/// the front robot first. A pair both of whose robots have fully passed the
/// conflict gets no edge.
PriorityGraph assign_priorities(const SystemState& s, const SectionCatalog& catalog);

/// Adds edges between one newly spawned robot and every conflicting existing
/// robot, oriented by the same arrival rule. Existing edges are untouched:
/// priorities, once assigned, are conserved.
void extend_priorities(PriorityGraph& graph, RobotId new_robot, const SystemState& s,
                       const SectionCatalog& catalog);

}  // namespace coord
