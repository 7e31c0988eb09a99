#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace coord {

using RobotId = std::uint32_t;

/// One curvilinear coordinate per robot, in the order the robots appear in
/// the system state. This is the configuration of the whole system in the
/// coordination space.
using Configuration = Eigen::VectorXd;

}  // namespace coord
