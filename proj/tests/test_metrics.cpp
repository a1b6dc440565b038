#include <doctest.h>

#include <random>

#include "csrl/metrics.hpp"
#include "support/oracles.hpp"

using namespace csrl;

namespace {

Trajectory traj_of(const std::vector<Vec3>& pts) {
  Trajectory t;
  t.frame = Frame::Mandrel;
  for (std::size_t i = 0; i < pts.size(); ++i)
    t.samples.push_back({static_cast<double>(i), {pts[i], Vec3::Zero()}});
  return t;
}

}  // namespace

TEST_CASE("pose_length pinned cases") {
  CHECK(pose_length(traj_of({Vec3::Zero(), Vec3(0.1, 0, 0)})) == doctest::Approx(0.1));
  // square with 0.1 m sides, closed
  const Trajectory square = traj_of({Vec3(0, 0, 0), Vec3(0.1, 0, 0), Vec3(0.1, 0.1, 0),
                                     Vec3(0, 0.1, 0), Vec3(0, 0, 0)});
  CHECK(pose_length(square) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK_THROWS_AS(pose_length(traj_of({Vec3::Zero()})), InvalidInputError);
}

TEST_CASE("pose_length equals the naive loop on random data") {
  std::mt19937_64 rng(3);
  std::vector<Vec3> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(oracles::random_vec3(rng));
  const Trajectory t = traj_of(pts);
  double naive = 0.0;
  for (int i = 1; i < 100; ++i) naive += (pts[i] - pts[i - 1]).norm();
  CHECK(pose_length(t) == doctest::Approx(naive).epsilon(1e-13));
}

TEST_CASE("removing an interior point never increases pose_length") {
  std::mt19937_64 rng(5);
  std::vector<Vec3> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(oracles::random_vec3(rng));
  const double full = pose_length(traj_of(pts));
  for (int drop = 1; drop < 29; ++drop) {
    std::vector<Vec3> reduced = pts;
    reduced.erase(reduced.begin() + drop);
    CHECK(pose_length(traj_of(reduced)) <= full + 1e-12);
  }
}

TEST_CASE("joint_length pinned cases and oracle") {
  std::vector<JointState> constant(5, JointState::Zero());
  CHECK(joint_length_deg(constant) == 0.0);

  // one joint sweeping 0 -> pi monotonically telescopes to 180 degrees
  std::vector<JointState> sweep;
  for (int i = 0; i <= 10; ++i) {
    JointState q = JointState::Zero();
    q[2] = M_PI * i / 10.0;
    sweep.push_back(q);
  }
  CHECK(joint_length_deg(sweep) == doctest::Approx(180.0).epsilon(1e-12));

  std::mt19937_64 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<JointState> random_seq;
  for (int i = 0; i < 40; ++i) {
    JointState q;
    for (int j = 0; j < kNumJoints; ++j) q[j] = g(rng);
    random_seq.push_back(q);
  }
  double naive = 0.0;
  for (int i = 1; i < 40; ++i)
    for (int j = 0; j < kNumJoints; ++j)
      naive += std::abs(random_seq[i][j] - random_seq[i - 1][j]) * 180.0 / M_PI;
  CHECK(joint_length_deg(random_seq) == doctest::Approx(naive).epsilon(1e-12));

  CHECK_THROWS_AS(joint_length_deg({JointState::Zero()}), InvalidInputError);
}

TEST_CASE("smoothness pinned cases") {
  // collinear
  std::vector<Vec3> line;
  for (int i = 0; i < 20; ++i) line.push_back(Vec3(0.01 * i, 0.02 * i, -0.005 * i));
  CHECK(smoothness_deg(traj_of(line)) == doctest::Approx(0.0).epsilon(1e-9));

  // right-angle zigzag turns 90 degrees at every interior point
  std::vector<Vec3> zigzag;
  for (int i = 0; i < 10; ++i)
    zigzag.push_back(Vec3(0.01 * ((i + 1) / 2), 0.01 * (i / 2), 0.0));
  CHECK(smoothness_deg(traj_of(zigzag)) == doctest::Approx(90.0).epsilon(1e-10));

  CHECK_THROWS_AS(smoothness_deg(traj_of({Vec3::Zero(), Vec3::Ones()})), InvalidInputError);
}

TEST_CASE("smoothness skips zero-length segments but keeps the turn") {
  // pause in the middle of a right-angle turn
  const Trajectory paused = traj_of(
      {Vec3(0, 0, 0), Vec3(0.01, 0, 0), Vec3(0.01, 0, 0), Vec3(0.01, 0.01, 0)});
  CHECK(smoothness_deg(paused) == doctest::Approx(90.0).epsilon(1e-10));

  // stationary everywhere: no direction change at all
  const Trajectory still = traj_of(std::vector<Vec3>(5, Vec3(0.3, 0.2, 0.1)));
  CHECK(smoothness_deg(still) == 0.0);
}

TEST_CASE("straight lines are perfectly smooth at any sampling density") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const Vec3 dir = oracles::random_vec3(rng).normalized();
    std::vector<Vec3> pts;
    double s = 0.0;
    std::uniform_real_distribution<double> step(0.001, 0.05);
    for (int i = 0; i < 50; ++i) {
      pts.push_back(dir * s);
      s += step(rng);
    }
    CHECK(smoothness_deg(traj_of(pts)) < 1e-9);
  }
}

TEST_CASE("metrics are invariant to rigid motion") {
  std::mt19937_64 rng(13);
  std::vector<Vec3> pts;
  for (int i = 0; i < 25; ++i) pts.push_back(oracles::random_vec3(rng, 0.1));
  const Trajectory t = traj_of(pts);
  const double len = pose_length(t);
  const double smooth = smoothness_deg(t);

  const Vec3 shift = oracles::random_vec3(rng, 2.0);
  const Eigen::Matrix3d rot = rotvec_to_matrix(oracles::random_rotvec(rng));
  std::vector<Vec3> moved;
  for (const auto& p : pts) moved.push_back(rot * p + shift);
  const Trajectory tm = traj_of(moved);
  CHECK(pose_length(tm) == doctest::Approx(len).epsilon(1e-12));
  CHECK(smoothness_deg(tm) == doctest::Approx(smooth).epsilon(1e-9));
}

TEST_CASE("smoothness stays within [0, 180] degrees") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<Vec3> pts;
    for (int i = 0; i < 30; ++i) pts.push_back(oracles::random_vec3(rng));
    const double s = smoothness_deg(traj_of(pts));
    CHECK(s >= 0.0);
    CHECK(s <= 180.0);
  }
}
