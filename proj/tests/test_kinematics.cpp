#include <doctest.h>

#include <random>

#include "csrl/kinematics.hpp"
#include "support/oracles.hpp"

using namespace csrl;

namespace {

// independent chain composition from explicit 4x4 matrices
Eigen::Matrix4d dh_matrix(double d, double a, double alpha, double theta) {
  Eigen::Matrix4d rz = Eigen::Matrix4d::Identity();
  rz(0, 0) = std::cos(theta);
  rz(0, 1) = -std::sin(theta);
  rz(1, 0) = std::sin(theta);
  rz(1, 1) = std::cos(theta);
  Eigen::Matrix4d tz = Eigen::Matrix4d::Identity();
  tz(2, 3) = d;
  Eigen::Matrix4d tx = Eigen::Matrix4d::Identity();
  tx(0, 3) = a;
  Eigen::Matrix4d rx = Eigen::Matrix4d::Identity();
  rx(1, 1) = std::cos(alpha);
  rx(1, 2) = -std::sin(alpha);
  rx(2, 1) = std::sin(alpha);
  rx(2, 2) = std::cos(alpha);
  return rz * tz * tx * rx;
}

Eigen::Matrix4d chain_oracle(const ArmModel& arm, const JointState& q) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  for (int i = 0; i < kNumJoints; ++i)
    m = m * dh_matrix(arm.dh[i].d, arm.dh[i].a, arm.dh[i].alpha, arm.dh[i].theta0 + q[i]);
  return m;
}

ArmModel wide_limit_arm() {
  ArmModel arm = default_arm();
  for (auto& [lo, hi] : arm.joint_limits) {
    lo = -7.0;
    hi = 7.0;
  }
  return arm;
}

JointState random_joints(const ArmModel& arm, std::mt19937_64& rng, double margin = 0.2) {
  JointState q;
  for (int i = 0; i < kNumJoints; ++i) {
    std::uniform_real_distribution<double> u(arm.joint_limits[i].first + margin,
                                             arm.joint_limits[i].second - margin);
    q[i] = u(rng);
  }
  return q;
}

}  // namespace

TEST_CASE("forward kinematics at zero matches the hand-composed chain") {
  const ArmModel arm = default_arm();
  const FkResult fk = forward_kinematics(arm, JointState::Zero());
  const Eigen::Matrix4d expected = chain_oracle(arm, JointState::Zero());
  CHECK((fk.frames[kNumJoints].matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
  // all-zero posture of the default arm: links stacked straight up
  CHECK((fk.end_effector.t - Vec3(0.0, 0.0, 1.306)).norm() < 1e-12);
}

TEST_CASE("forward kinematics matches the oracle on random postures") {
  const ArmModel arm = default_arm();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const JointState q = random_joints(arm, rng);
    const FkResult fk = forward_kinematics(arm, q);
    const Eigen::Matrix4d expected = chain_oracle(arm, q);
    CHECK((fk.frames[kNumJoints].matrix() - expected).cwiseAbs().maxCoeff() < 1e-11);
  }
}

TEST_CASE("rotating the last wrist joint leaves the tool point fixed") {
  const ArmModel arm = default_arm();
  std::mt19937_64 rng(7);
  JointState q = random_joints(arm, rng);
  const Vec3 p0 = forward_kinematics(arm, q).end_effector.t;
  q[6] = 1.3;
  const Vec3 p1 = forward_kinematics(arm, q).end_effector.t;
  CHECK((p1 - p0).norm() < 1e-12);
}

TEST_CASE("a full turn of a joint reproduces the pose") {
  const ArmModel arm = wide_limit_arm();
  JointState q = JointState::Zero();
  q[0] = -0.4;
  const FkResult before = forward_kinematics(arm, q);
  q[0] += 2.0 * M_PI;
  const FkResult after = forward_kinematics(arm, q);
  CHECK((before.frames[kNumJoints].matrix() - after.frames[kNumJoints].matrix())
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("forward kinematics rejects out-of-limit joints") {
  const ArmModel arm = default_arm();
  JointState q = JointState::Zero();
  q[1] = arm.joint_limits[1].second + 0.1;
  CHECK_THROWS_AS(forward_kinematics(arm, q), JointLimitError);
}

TEST_CASE("inverse kinematics is a fixed point at the seed's own pose") {
  const ArmModel arm = default_arm();
  std::mt19937_64 rng(13);
  const JointState seed = random_joints(arm, rng);
  const Pose6D target = forward_kinematics(arm, seed).end_effector;
  const JointState sol = inverse_kinematics(arm, target, seed);
  CHECK((sol - seed).norm() == 0.0);
}

TEST_CASE("inverse kinematics converges after a small perturbation") {
  const ArmModel arm = default_arm();
  std::mt19937_64 rng(17);
  const Vec3 shoulder(0.0, 0.0, arm.dh[0].d);
  for (int i = 0; i < 50; ++i) {
    JointState seed;
    Pose6D target;
    do {  // keep the perturbed target inside the reachable annulus
      seed = random_joints(arm, rng);
      target = forward_kinematics(arm, seed).end_effector;
      target.t.x() += 0.001;
      const Vec3 wrist = target.t - rotvec_to_matrix(target.r) * Vec3(0.0, 0.0, arm.dh[6].d);
      if (const double d = (wrist - shoulder).norm(); d > 0.10 && d < 0.80) break;
    } while (true);
    const JointState sol = inverse_kinematics(arm, target, seed);
    const Pose6D reached = forward_kinematics(arm, sol).end_effector;
    CHECK((reached.t - target.t).norm() < 1e-4);
  }
}

TEST_CASE("inverse kinematics reports unreachable targets") {
  const ArmModel arm = default_arm();
  Pose6D target;
  target.t = Vec3(10.0, 0.0, 0.0);
  CHECK_THROWS_AS(inverse_kinematics(arm, target, arm.home), UnreachablePoseError);
}

TEST_CASE("IK round-trip over 500 random reachable targets") {
  const ArmModel arm = default_arm();
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> mm(-0.005, 0.005);
  // a perturbed pose is reachable when its wrist center stays inside the
  // annulus the upper arm and forearm can span
  const Vec3 shoulder(0.0, 0.0, arm.dh[0].d);
  const auto reachable = [&](const Pose6D& target) {
    const Vec3 wrist = target.t - rotvec_to_matrix(target.r) * Vec3(0.0, 0.0, arm.dh[6].d);
    const double d = (wrist - shoulder).norm();
    return d > 0.10 && d < 0.80;
  };
  int failures = 0;
  for (int i = 0; i < 500; ++i) {
    JointState q;
    Pose6D target;
    do {
      q = random_joints(arm, rng);
      target = forward_kinematics(arm, q).end_effector;
      target.t += Vec3(mm(rng), mm(rng), mm(rng));
    } while (!reachable(target));
    try {
      const JointState sol = inverse_kinematics(arm, target, q);
      const FkResult reached = forward_kinematics(arm, sol);
      CHECK((reached.end_effector.t - target.t).norm() < 1e-4);
      const Eigen::Matrix3d err = rotvec_to_matrix(target.r) *
                                  rotvec_to_matrix(reached.end_effector.r).transpose();
      CHECK(matrix_to_rotvec(err).norm() < 1e-3);
    } catch (const UnreachablePoseError&) {
      ++failures;
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("IK solutions vary continuously along a straight-line path") {
  const ArmModel arm = default_arm();
  const JointState start = arm.home;
  const Pose6D p0 = forward_kinematics(arm, start).end_effector;
  Pose6D p1 = p0;
  p1.t += Vec3(0.05, -0.04, 0.06);
  JointState seed = start;
  for (int i = 1; i <= 100; ++i) {
    Pose6D target = p0;
    target.t += (p1.t - p0.t) * (static_cast<double>(i) / 100.0);
    const JointState sol = inverse_kinematics(arm, target, seed);
    CHECK((sol - seed).cwiseAbs().maxCoeff() < 0.2);
    seed = sol;
  }
}

TEST_CASE("joint_delta_deg pinned values and metric properties") {
  JointState a = JointState::Zero(), b = JointState::Zero();
  CHECK(joint_delta_deg(a, a) == 0.0);
  b[3] = 0.1;
  CHECK(joint_delta_deg(a, b) == doctest::Approx(5.7296).epsilon(1e-4));

  std::mt19937_64 rng(23);
  const ArmModel arm = default_arm();
  for (int i = 0; i < 100; ++i) {
    const JointState q1 = random_joints(arm, rng);
    const JointState q2 = random_joints(arm, rng);
    const JointState q3 = random_joints(arm, rng);
    double naive = 0.0;
    for (int j = 0; j < kNumJoints; ++j) naive += std::abs(q2[j] - q1[j]) * 180.0 / M_PI;
    CHECK(joint_delta_deg(q1, q2) == doctest::Approx(naive).epsilon(1e-12));
    CHECK(joint_delta_deg(q1, q2) == doctest::Approx(joint_delta_deg(q2, q1)).epsilon(1e-12));
    CHECK(joint_delta_deg(q1, q3) <=
          joint_delta_deg(q1, q2) + joint_delta_deg(q2, q3) + 1e-9);
    CHECK(joint_delta_deg(q1, q2) >= 0.0);
  }
}

TEST_CASE("collision detection against spheres") {
  const ArmModel arm = default_arm();
  const JointState q = arm.home;
  Scene empty;
  CHECK_FALSE(check_collision(arm, q, empty));

  const FkResult fk = forward_kinematics(arm, q);
  // use the upper-arm link, which has nonzero length at any posture
  const Vec3 mid = 0.5 * (fk.frames[2].translation() + fk.frames[3].translation());

  Scene engulfing;
  engulfing.spheres.push_back({mid, arm.link_radii[2] + 0.05});
  CHECK(check_collision(arm, q, engulfing));

  // sphere placed just beyond touching distance
  const Vec3 a = fk.frames[2].translation(), b = fk.frames[3].translation();
  Vec3 away = (b - a).cross(Vec3::UnitX());
  if (away.norm() < 1e-9) away = (b - a).cross(Vec3::UnitY());
  away.normalize();
  const double sphere_r = 0.03;
  const double clearance = arm.link_radii[2] + sphere_r + 1e-6;
  Scene grazing;
  grazing.spheres.push_back({mid + away * clearance, sphere_r});
  CHECK(segment_point_distance(a, b, grazing.spheres[0].center) ==
        doctest::Approx(clearance).epsilon(1e-9));
  CHECK_FALSE(check_collision(arm, q, grazing));

  Scene touching;
  touching.spheres.push_back({mid + away * (clearance - 2e-6), sphere_r});
  CHECK(check_collision(arm, q, touching));
}

TEST_CASE("collision is monotone in obstacle radius") {
  const ArmModel arm = default_arm();
  std::mt19937_64 rng(29);
  for (int i = 0; i < 50; ++i) {
    const JointState q = random_joints(arm, rng);
    Scene scene;
    scene.spheres.push_back({oracles::random_vec3(rng, 0.8), 0.05 + 0.3 * i / 50.0});
    const bool hit = check_collision(arm, q, scene);
    scene.spheres[0].radius += 0.2;
    if (hit) CHECK(check_collision(arm, q, scene));
  }
}

TEST_CASE("segment-box distance agrees with a dense point sweep") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const Vec3 a = oracles::random_vec3(rng), b = oracles::random_vec3(rng);
    BoxObstacle box;
    const Vec3 c = oracles::random_vec3(rng, 0.5);
    box.min = c - Vec3(0.2, 0.3, 0.1);
    box.max = c + Vec3(0.25, 0.15, 0.3);
    double brute = 1e300;
    for (int s = 0; s <= 2000; ++s) {
      const Vec3 p = a + (b - a) * (s / 2000.0);
      const Vec3 clamped = p.cwiseMax(box.min).cwiseMin(box.max);
      brute = std::min(brute, (p - clamped).norm());
    }
    CHECK(segment_box_distance(a, b, box) == doctest::Approx(brute).epsilon(1e-5));
  }
}

TEST_CASE("segment-cylinder distance agrees with a dense point sweep") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 100; ++i) {
    const Vec3 a = oracles::random_vec3(rng), b = oracles::random_vec3(rng);
    CylinderObstacle cyl;
    cyl.base = oracles::random_vec3(rng, 0.4);
    cyl.axis = oracles::random_rotvec(rng).normalized();
    cyl.radius = 0.1;
    cyl.height = 0.3;
    const Vec3 axis = cyl.axis;
    double brute = 1e300;
    for (int s = 0; s <= 4000; ++s) {
      const Vec3 p = a + (b - a) * (s / 4000.0);
      const Vec3 rel = p - cyl.base;
      const double z = rel.dot(axis);
      const double rho = (rel - z * axis).norm();
      const double dr = std::max(0.0, rho - cyl.radius);
      const double dz = std::max({-z, z - cyl.height, 0.0});
      brute = std::min(brute, std::sqrt(dr * dr + dz * dz));
    }
    const double got = segment_cylinder_distance(a, b, cyl);
    CHECK(got <= brute + 1e-9);
    CHECK(got == doctest::Approx(brute).epsilon(1e-4));
  }
}
