#include <doctest.h>

#include <random>

#include "csrl/geometry.hpp"
#include "support/oracles.hpp"

using namespace csrl;

namespace {

Trajectory make_traj(const std::vector<Vec3>& points, Frame frame = Frame::Camera) {
  Trajectory t;
  t.frame = frame;
  for (std::size_t i = 0; i < points.size(); ++i)
    t.samples.push_back({0.1 * static_cast<double>(i), {points[i], Vec3::Zero()}});
  return t;
}

}  // namespace

TEST_CASE("rotvec_to_matrix on pinned rotations") {
  CHECK(rotvec_to_matrix(Vec3::Zero()).isApprox(Eigen::Matrix3d::Identity(), 1e-15));

  const Eigen::Matrix3d half_turn_x = rotvec_to_matrix(Vec3(M_PI, 0, 0));
  Eigen::Matrix3d expected = Eigen::Vector3d(1, -1, -1).asDiagonal();
  CHECK((half_turn_x - expected).norm() < 1e-12);

  CHECK_THROWS_AS(rotvec_to_matrix(Vec3(std::nan(""), 0, 0)), InvalidInputError);
}

TEST_CASE("rotvec_to_matrix output is a rotation for random and tiny inputs") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    Vec3 r = oracles::random_rotvec(rng);
    if (i % 5 == 0) r *= 1e-9;  // exercise the series branch
    const Eigen::Matrix3d m = rotvec_to_matrix(r);
    CHECK((m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(m.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("matrix_to_rotvec round-trips 1000 random vectors") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 r = oracles::random_rotvec(rng);
    const Vec3 back = matrix_to_rotvec(rotvec_to_matrix(r));
    CHECK((back - r).norm() < 1e-10);
  }
}

TEST_CASE("matrix_to_rotvec canonicalization") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    // feed a non-canonical representative: angle in (pi, 2 pi)
    std::uniform_real_distribution<double> u(1.05 * M_PI, 1.95 * M_PI);
    const Vec3 axis = oracles::random_rotvec(rng).normalized();
    const double angle = u(rng);
    const Vec3 r = matrix_to_rotvec(rotvec_to_matrix(axis * angle));
    CHECK(r.norm() <= M_PI + 1e-12);
    // same rotation
    CHECK((rotvec_to_matrix(r) - rotvec_to_matrix(axis * angle)).cwiseAbs().maxCoeff() < 1e-9);
  }

  // exact half turns: the first nonzero axis component comes out positive
  const Vec3 rx = matrix_to_rotvec(rotvec_to_matrix(Vec3(-M_PI, 0, 0)));
  CHECK(rx.x() == doctest::Approx(M_PI).epsilon(1e-12));
  const Vec3 ry = matrix_to_rotvec(rotvec_to_matrix(Vec3(0, -M_PI, 0)));
  CHECK(ry.y() == doctest::Approx(M_PI).epsilon(1e-12));
  const Vec3 rz = matrix_to_rotvec(rotvec_to_matrix(Vec3(0, 0, -M_PI)));
  CHECK(rz.z() == doctest::Approx(M_PI).epsilon(1e-12));
}

TEST_CASE("smooth_moving_average identities") {
  const Trajectory constant = make_traj(std::vector<Vec3>(20, Vec3(0.3, -0.2, 0.1)));
  const Trajectory smoothed = smooth_moving_average(constant, 10);
  REQUIRE(smoothed.size() == constant.size());
  for (std::size_t i = 0; i < constant.size(); ++i) {
    CHECK(smoothed[i].t == constant[i].t);
    CHECK((smoothed[i].pose.t - constant[i].pose.t).norm() < 1e-15);
  }

  std::mt19937_64 rng(5);
  std::vector<Vec3> pts;
  for (int i = 0; i < 15; ++i) pts.push_back(oracles::random_vec3(rng));
  const Trajectory noisy = make_traj(pts);
  const Trajectory w1 = smooth_moving_average(noisy, 1);
  for (std::size_t i = 0; i < noisy.size(); ++i)
    CHECK((w1[i].pose.t - noisy[i].pose.t).norm() == 0.0);
}

TEST_CASE("smooth_moving_average leaves a linear ramp's interior unchanged") {
  std::vector<Vec3> pts;
  for (int i = 0; i < 12; ++i) pts.push_back(Vec3(i * 0.01, 0, 0));
  const Trajectory smoothed = smooth_moving_average(make_traj(pts), 3);
  for (int i = 1; i < 11; ++i)
    CHECK(smoothed[i].pose.t.x() == doctest::Approx(i * 0.01).epsilon(1e-14));
}

TEST_CASE("smooth_moving_average stays within the input range per component") {
  std::mt19937_64 rng(31);
  std::vector<Vec3> pts;
  for (int i = 0; i < 40; ++i) pts.push_back(oracles::random_vec3(rng));
  const Trajectory traj = make_traj(pts);
  for (int window : {2, 5, 10, 39}) {
    const Trajectory s = smooth_moving_average(traj, window);
    REQUIRE(s.size() == traj.size());
    for (int c = 0; c < 3; ++c) {
      double lo = 1e300, hi = -1e300;
      for (const auto& sample : traj.samples) {
        lo = std::min(lo, sample.pose.t[c]);
        hi = std::max(hi, sample.pose.t[c]);
      }
      for (const auto& sample : s.samples) {
        CHECK(sample.pose.t[c] >= lo - 1e-12);
        CHECK(sample.pose.t[c] <= hi + 1e-12);
      }
    }
  }
}

TEST_CASE("smooth_moving_average rejects bad windows") {
  const Trajectory traj = make_traj(std::vector<Vec3>(5, Vec3::Zero()));
  CHECK_THROWS_AS(smooth_moving_average(traj, 0), InvalidInputError);
  CHECK_THROWS_AS(smooth_moving_average(traj, 6), InvalidInputError);
}

TEST_CASE("to_mandrel_frame with identity and self-relative poses") {
  std::mt19937_64 rng(41);
  Trajectory device;
  device.frame = Frame::Camera;
  for (int i = 0; i < 10; ++i)
    device.samples.push_back({0.1 * i, {oracles::random_vec3(rng), oracles::random_rotvec(rng)}});

  Trajectory identity_mandrel;
  identity_mandrel.frame = Frame::Camera;
  for (int i = 0; i < 10; ++i) identity_mandrel.samples.push_back({0.1 * i, {}});

  const Trajectory rel = to_mandrel_frame(device, identity_mandrel);
  CHECK(rel.frame == Frame::Mandrel);
  for (int i = 0; i < 10; ++i) {
    CHECK((rel[i].pose.t - device[i].pose.t).norm() < 1e-12);
    CHECK((rel[i].pose.r - device[i].pose.r).norm() < 1e-12);
  }

  const Trajectory self = to_mandrel_frame(device, device);
  for (int i = 0; i < 10; ++i) {
    CHECK(self[i].pose.t.norm() < 1e-12);
    CHECK(self[i].pose.r.norm() < 1e-12);
  }
}

TEST_CASE("to_mandrel_frame pure translation case") {
  Trajectory device, mandrel;
  device.frame = mandrel.frame = Frame::Camera;
  for (int i = 0; i < 3; ++i) {
    device.samples.push_back({0.1 * i, {Vec3(0.3, 0.2, 0.0), Vec3::Zero()}});
    mandrel.samples.push_back({0.1 * i, {Vec3(0.1, 0.0, 0.0), Vec3::Zero()}});
  }
  const Trajectory rel = to_mandrel_frame(device, mandrel);
  for (int i = 0; i < 3; ++i) CHECK((rel[i].pose.t - Vec3(0.2, 0.2, 0.0)).norm() < 1e-14);
}

TEST_CASE("to_mandrel_frame inverts by composing back") {
  std::mt19937_64 rng(43);
  Trajectory device, mandrel;
  device.frame = mandrel.frame = Frame::Camera;
  for (int i = 0; i < 50; ++i) {
    device.samples.push_back({0.1 * i, {oracles::random_vec3(rng), oracles::random_rotvec(rng)}});
    mandrel.samples.push_back({0.1 * i, {oracles::random_vec3(rng), oracles::random_rotvec(rng)}});
  }
  const Trajectory rel = to_mandrel_frame(device, mandrel);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Isometry3d recomposed = mandrel[i].pose.to_isometry() * rel[i].pose.to_isometry();
    CHECK((recomposed.matrix() - device[i].pose.to_isometry().matrix()).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("to_mandrel_frame rejects mismatched inputs") {
  Trajectory a = make_traj(std::vector<Vec3>(4, Vec3::Zero()));
  Trajectory b = make_traj(std::vector<Vec3>(5, Vec3::Zero()));
  CHECK_THROWS_AS(to_mandrel_frame(a, b), AlignmentError);

  Trajectory c = make_traj(std::vector<Vec3>(4, Vec3::Zero()));
  c.samples[2].t += 0.05;
  CHECK_THROWS_AS(to_mandrel_frame(a, c), AlignmentError);

  Trajectory d = make_traj(std::vector<Vec3>(4, Vec3::Zero()), Frame::Mandrel);
  CHECK_THROWS_AS(to_mandrel_frame(d, a), InvalidInputError);
}

TEST_CASE("trajectory validation catches ordering and length") {
  Trajectory t = make_traj({Vec3::Zero()});
  CHECK_THROWS_AS(t.validate(), ValidationError);
  t = make_traj(std::vector<Vec3>(4, Vec3::Zero()));
  CHECK_NOTHROW(t.validate());
  std::swap(t.samples[1].t, t.samples[2].t);
  CHECK_THROWS_AS(t.validate(), ValidationError);
}
