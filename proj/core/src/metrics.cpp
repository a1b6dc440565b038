#include "csrl/metrics.hpp"

#include <cmath>

namespace csrl {

double pose_length(const Trajectory& traj) {
  if (traj.size() < 2) throw InvalidInputError("pose_length needs at least 2 samples");
  double len = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i)
    len += (traj[i].pose.t - traj[i - 1].pose.t).norm();
  return len;
}

double joint_length_deg(const std::vector<JointState>& joints) {
  if (joints.size() < 2) throw InvalidInputError("joint_length needs at least 2 samples");
  double len = 0.0;
  for (std::size_t i = 1; i < joints.size(); ++i)
    len += joint_delta_deg(joints[i - 1], joints[i]);
  return len;
}

double smoothness_deg(const Trajectory& traj) {
  if (traj.size() < 3) throw InvalidInputError("smoothness needs at least 3 samples");

  // collapse zero-length segments
  std::vector<Vec3> pts;
  pts.reserve(traj.size());
  pts.push_back(traj[0].pose.t);
  for (std::size_t i = 1; i < traj.size(); ++i)
    if ((traj[i].pose.t - pts.back()).norm() >= 1e-12) pts.push_back(traj[i].pose.t);

  if (pts.size() < 3) return 0.0;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    const Vec3 u = pts[i] - pts[i - 1];
    const Vec3 v = pts[i + 1] - pts[i];
    sum += std::atan2(u.cross(v).norm(), u.dot(v));
    ++count;
  }
  return sum / static_cast<double>(count) * 180.0 / M_PI;
}

}  // namespace csrl
