#pragma once

#include <string>
#include <vector>

#include "csrl/geometry.hpp"
#include "csrl/kinematics.hpp"

namespace csrl {

struct TrajectoryReport {
  std::string label;
  double pose_length_m = 0.0;
  double joint_length_deg = 0.0;
  double smoothness_deg = 0.0;
};

/// Sum of Euclidean distances between consecutive translations.
double pose_length(const Trajectory& traj);

/// Sum over steps of the per-joint absolute angle differences, degrees.
double joint_length_deg(const std::vector<JointState>& joints);

/// Mean direction-change angle over consecutive point triplets, in degrees.
/// Zero-length segments are dropped before the angles are taken, so a pause
/// followed by a turn still counts as a turn.
double smoothness_deg(const Trajectory& traj);

}  // namespace csrl
