#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <vector>

#include "csrl/error.hpp"

namespace csrl {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// 6-DoF pose: translation in meters plus a rotation vector in radians
/// (axis-angle: direction = rotation axis, magnitude = angle).
struct Pose6D {
  Vec3 t{Vec3::Zero()};
  Vec3 r{Vec3::Zero()};

  Eigen::Isometry3d to_isometry() const;
  static Pose6D from_isometry(const Eigen::Isometry3d& m);

  Vec6 to_vec6() const {
    Vec6 v;
    v << t, r;
    return v;
  }
  static Pose6D from_vec6(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }

  bool finite() const { return t.allFinite() && r.allFinite(); }
};

enum class Frame { Camera, Mandrel };

struct TrajectorySample {
  double t = 0.0;  // seconds
  Pose6D pose;
};

/// Timestamped pose sequence. Timestamps must be strictly increasing and the
/// sequence must hold at least two samples to be a valid trajectory.
struct Trajectory {
  Frame frame = Frame::Camera;
  std::vector<TrajectorySample> samples;

  std::size_t size() const { return samples.size(); }
  const TrajectorySample& operator[](std::size_t i) const { return samples[i]; }
  TrajectorySample& operator[](std::size_t i) { return samples[i]; }

  /// Throws ValidationError on non-monotone timestamps, short or non-finite data.
  void validate() const;
};

/// One recorded demonstration: device and mandrel pose streams sharing timestamps.
struct Demo {
  Trajectory device;
  Trajectory mandrel;
};

struct DemoSet {
  std::vector<Demo> demos;
};

/// Rodrigues formula with a series fallback near zero angle.
/// Output is orthonormal with determinant +1.
Eigen::Matrix3d rotvec_to_matrix(const Vec3& r);

/// Canonical axis-angle extraction: angle in [0, pi]; the pi ambiguity is
/// resolved by making the first nonzero axis component positive.
Vec3 matrix_to_rotvec(const Eigen::Matrix3d& m);

/// Centered moving average over each of the six pose components. Even window
/// sizes are widened to the next odd width so the window stays centered; at
/// the boundaries the window shrinks symmetrically, so length and timestamps
/// are preserved.
Trajectory smooth_moving_average(const Trajectory& traj, int window);

/// Express the device trajectory relative to the mandrel: per sample
/// inverse(mandrel) * device as a full SE(3) product. Both inputs must be in
/// the camera frame with matching timestamps.
Trajectory to_mandrel_frame(const Trajectory& device, const Trajectory& mandrel);

}  // namespace csrl
