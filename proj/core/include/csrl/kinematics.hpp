#pragma once

#include <array>
#include <vector>

#include "csrl/geometry.hpp"

namespace csrl {

inline constexpr int kNumJoints = 7;

using JointState = Eigen::Matrix<double, kNumJoints, 1>;

/// Standard Denavit-Hartenberg row: the joint transform is
/// Rz(theta0 + q) * Tz(d) * Tx(a) * Rx(alpha).
struct DhRow {
  double d = 0.0;      // link offset, meters
  double a = 0.0;      // link length, meters
  double alpha = 0.0;  // link twist, radians
  double theta0 = 0.0; // joint angle offset, radians
};

struct ArmModel {
  std::array<DhRow, kNumJoints> dh;
  std::array<std::pair<double, double>, kNumJoints> joint_limits;  // (min, max) radians
  std::array<double, kNumJoints> link_radii;                       // capsule radii, meters
  JointState home = JointState::Zero();  // nominal posture seeding the first IK solve

  bool within_limits(const JointState& q) const;
  JointState clamped(const JointState& q) const;
};

/// Generic 7-DoF chain with published-style DH numbers; reach is roughly 0.8 m.
ArmModel default_arm();

struct SphereObstacle {
  Vec3 center;
  double radius;
};

struct BoxObstacle {  // axis-aligned
  Vec3 min;
  Vec3 max;
};

struct CylinderObstacle {
  Vec3 base;    // center of the bottom cap
  Vec3 axis;    // unit direction from base towards the top cap
  double radius;
  double height;
};

struct Scene {
  std::vector<SphereObstacle> spheres;
  std::vector<BoxObstacle> boxes;
  std::vector<CylinderObstacle> cylinders;

  bool empty() const { return spheres.empty() && boxes.empty() && cylinders.empty(); }
};

struct FkResult {
  Pose6D end_effector;
  // base frame plus the frame after each of the 7 joints
  std::array<Eigen::Isometry3d, kNumJoints + 1> frames;
};

struct IkParams {
  double lambda = 0.05;      // damped-least-squares regularizer
  double step_clamp = 0.2;   // max joint change per iteration, radians
  int max_iters = 200;
  double tol_pos = 1e-4;     // meters
  double tol_rot = 1e-3;     // radians
};

/// Serial-chain composition of the per-joint DH transforms.
/// Throws JointLimitError when q violates the limits.
FkResult forward_kinematics(const ArmModel& arm, const JointState& q);

/// Damped-least-squares iteration from the seed. Returns a solution with
/// position error < tol_pos and orientation error < tol_rot or throws
/// UnreachablePoseError. Joints are clamped to their limits every iteration,
/// so consecutive solves seeded from the previous solution stay continuous.
JointState inverse_kinematics(const ArmModel& arm, const Pose6D& target, const JointState& seed,
                              const IkParams& params = {});

/// Sum of absolute per-joint differences, in degrees.
double joint_delta_deg(const JointState& q1, const JointState& q2);

/// True iff any link capsule (segment between consecutive link frames with the
/// link radius) intersects any obstacle.
bool check_collision(const ArmModel& arm, const JointState& q, const Scene& scene);

// exposed for the collision tests
double segment_point_distance(const Vec3& a, const Vec3& b, const Vec3& p);
double segment_box_distance(const Vec3& a, const Vec3& b, const BoxObstacle& box);
double segment_cylinder_distance(const Vec3& a, const Vec3& b, const CylinderObstacle& cyl);

}  // namespace csrl
