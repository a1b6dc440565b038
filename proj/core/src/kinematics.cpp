#include "csrl/kinematics.hpp"

#include <cmath>

namespace csrl {

bool ArmModel::within_limits(const JointState& q) const {
  for (int i = 0; i < kNumJoints; ++i)
    if (q[i] < joint_limits[i].first || q[i] > joint_limits[i].second) return false;
  return true;
}

JointState ArmModel::clamped(const JointState& q) const {
  JointState out = q;
  for (int i = 0; i < kNumJoints; ++i)
    out[i] = std::clamp(q[i], joint_limits[i].first, joint_limits[i].second);
  return out;
}

ArmModel default_arm() {
  ArmModel arm;
  const double hp = M_PI / 2.0;
  arm.dh = {{{0.36, 0.0, -hp, 0.0},
             {0.00, 0.0, hp, 0.0},
             {0.42, 0.0, hp, 0.0},
             {0.00, 0.0, -hp, 0.0},
             {0.40, 0.0, -hp, 0.0},
             {0.00, 0.0, hp, 0.0},
             {0.126, 0.0, 0.0, 0.0}}};
  const double deg = M_PI / 180.0;
  arm.joint_limits = {{{-170 * deg, 170 * deg},
                       {-120 * deg, 120 * deg},
                       {-170 * deg, 170 * deg},
                       {-120 * deg, 120 * deg},
                       {-170 * deg, 170 * deg},
                       {-120 * deg, 120 * deg},
                       {-175 * deg, 175 * deg}}};
  arm.link_radii = {0.08, 0.08, 0.07, 0.07, 0.06, 0.05, 0.04};
  arm.home << 0.0, 0.6, 0.0, -1.2, 0.0, 0.9, 0.0;
  return arm;
}

namespace {

Eigen::Isometry3d dh_transform(const DhRow& row, double q) {
  const double ct = std::cos(row.theta0 + q), st = std::sin(row.theta0 + q);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  Eigen::Isometry3d m = Eigen::Isometry3d::Identity();
  m.matrix() << ct, -st * ca, st * sa, row.a * ct,
                st, ct * ca, -ct * sa, row.a * st,
                0.0, sa, ca, row.d,
                0.0, 0.0, 0.0, 1.0;
  return m;
}

}  // namespace

FkResult forward_kinematics(const ArmModel& arm, const JointState& q) {
  if (!arm.within_limits(q)) throw JointLimitError("joint state outside limits");
  FkResult fk;
  fk.frames[0] = Eigen::Isometry3d::Identity();
  for (int i = 0; i < kNumJoints; ++i)
    fk.frames[i + 1] = fk.frames[i] * dh_transform(arm.dh[i], q[i]);
  fk.end_effector = Pose6D::from_isometry(fk.frames[kNumJoints]);
  return fk;
}

namespace {

// geometric Jacobian and pose error evaluated without the limit check,
// since the iterate is kept clamped
FkResult fk_unchecked(const ArmModel& arm, const JointState& q) {
  FkResult fk;
  fk.frames[0] = Eigen::Isometry3d::Identity();
  for (int i = 0; i < kNumJoints; ++i)
    fk.frames[i + 1] = fk.frames[i] * dh_transform(arm.dh[i], q[i]);
  fk.end_effector = Pose6D::from_isometry(fk.frames[kNumJoints]);
  return fk;
}

}  // namespace

namespace {

Eigen::Matrix<double, 6, 1> pose_error(const Eigen::Matrix3d& target_rot, const Vec3& target_t,
                                       const FkResult& fk) {
  Eigen::Matrix<double, 6, 1> err;
  err.head<3>() = target_t - fk.frames[kNumJoints].translation();
  err.tail<3>() = matrix_to_rotvec(target_rot * fk.frames[kNumJoints].linear().transpose());
  return err;
}

}  // namespace

JointState inverse_kinematics(const ArmModel& arm, const Pose6D& target, const JointState& seed,
                              const IkParams& params) {
  if (!arm.within_limits(seed)) throw JointLimitError("IK seed outside joint limits");
  const Eigen::Matrix3d target_rot = rotvec_to_matrix(target.r);

  JointState q = seed;
  FkResult fk = fk_unchecked(arm, q);
  Eigen::Matrix<double, 6, 1> err = pose_error(target_rot, target.t, fk);
  double lambda = params.lambda;
  for (int iter = 0; iter <= params.max_iters; ++iter) {
    if (err.head<3>().norm() < params.tol_pos && err.tail<3>().norm() < params.tol_rot) return q;
    if (iter == params.max_iters) break;

    const Vec3 p_ee = fk.frames[kNumJoints].translation();
    Eigen::Matrix<double, 6, kNumJoints> jac;
    for (int i = 0; i < kNumJoints; ++i) {
      const Vec3 z = fk.frames[i].linear().col(2);
      const Vec3 p = fk.frames[i].translation();
      jac.col(i).head<3>() = z.cross(p_ee - p);
      jac.col(i).tail<3>() = z;
    }

    // the damping adapts Levenberg-Marquardt style around the base value:
    // rejected steps raise it, accepted steps let it decay again, which keeps
    // progress alive through near-singular postures
    for (int attempt = 0; attempt < 12; ++attempt) {
      const Eigen::Matrix<double, 6, 6> jjt =
          jac * jac.transpose() + lambda * lambda * Eigen::Matrix<double, 6, 6>::Identity();
      JointState dq = jac.transpose() * jjt.ldlt().solve(err);
      for (int i = 0; i < kNumJoints; ++i)
        dq[i] = std::clamp(dq[i], -params.step_clamp, params.step_clamp);
      const JointState candidate = arm.clamped(q + dq);
      const FkResult fk_cand = fk_unchecked(arm, candidate);
      const Eigen::Matrix<double, 6, 1> err_cand = pose_error(target_rot, target.t, fk_cand);
      if (err_cand.norm() < err.norm() || attempt == 11) {
        q = candidate;
        fk = fk_cand;
        err = err_cand;
        lambda = std::max(lambda * 0.5, 1e-4);
        break;
      }
      lambda = std::min(lambda * 4.0, 1e8);
    }
  }
  throw UnreachablePoseError("IK did not converge to the target pose");
}

double joint_delta_deg(const JointState& q1, const JointState& q2) {
  return (q2 - q1).cwiseAbs().sum() * 180.0 / M_PI;
}

double segment_point_distance(const Vec3& a, const Vec3& b, const Vec3& p) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 < 1e-30) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

namespace {

double point_box_distance(const Vec3& p, const BoxObstacle& box) {
  double d2 = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double lo = box.min[i] - p[i];
    const double hi = p[i] - box.max[i];
    const double d = std::max({lo, hi, 0.0});
    d2 += d * d;
  }
  return std::sqrt(d2);
}

double point_cylinder_distance(const Vec3& p, const CylinderObstacle& cyl) {
  const Vec3 axis = cyl.axis.normalized();
  const Vec3 rel = p - cyl.base;
  const double z = rel.dot(axis);
  const double rho = (rel - z * axis).norm();
  const double dr = std::max(0.0, rho - cyl.radius);
  const double dz = std::max({-z, z - cyl.height, 0.0});
  return std::sqrt(dr * dr + dz * dz);
}

// distance from a point moving along the segment to a convex solid is convex
// in the segment parameter; golden-section search finds its minimum
template <typename DistFn>
double segment_convex_distance(const Vec3& a, const Vec3& b, DistFn dist) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double m1 = hi - inv_phi * (hi - lo);
  double m2 = lo + inv_phi * (hi - lo);
  double f1 = dist(a + m1 * (b - a));
  double f2 = dist(a + m2 * (b - a));
  for (int it = 0; it < 120; ++it) {
    if (f1 <= f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - inv_phi * (hi - lo);
      f1 = dist(a + m1 * (b - a));
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + inv_phi * (hi - lo);
      f2 = dist(a + m2 * (b - a));
    }
  }
  return std::min({f1, f2, dist(a), dist(b)});
}

}  // namespace

double segment_box_distance(const Vec3& a, const Vec3& b, const BoxObstacle& box) {
  return segment_convex_distance(a, b, [&](const Vec3& p) { return point_box_distance(p, box); });
}

double segment_cylinder_distance(const Vec3& a, const Vec3& b, const CylinderObstacle& cyl) {
  return segment_convex_distance(a, b,
                                 [&](const Vec3& p) { return point_cylinder_distance(p, cyl); });
}

bool check_collision(const ArmModel& arm, const JointState& q, const Scene& scene) {
  if (scene.empty()) return false;
  const FkResult fk = forward_kinematics(arm, q);
  for (int i = 0; i < kNumJoints; ++i) {
    const Vec3 a = fk.frames[i].translation();
    const Vec3 b = fk.frames[i + 1].translation();
    const double r = arm.link_radii[i];
    for (const auto& s : scene.spheres)
      if (segment_point_distance(a, b, s.center) <= r + s.radius) return true;
    for (const auto& box : scene.boxes)
      if (segment_box_distance(a, b, box) <= r) return true;
    for (const auto& cyl : scene.cylinders)
      if (segment_cylinder_distance(a, b, cyl) <= r) return true;
  }
  return false;
}

}  // namespace csrl
