#include "csrl/geometry.hpp"

#include <cmath>

namespace csrl {

namespace {

Eigen::Matrix3d skew(const Vec3& v) {
  Eigen::Matrix3d m;
  m << 0, -v.z(), v.y(),
       v.z(), 0, -v.x(),
       -v.y(), v.x(), 0;
  return m;
}

}  // namespace

Eigen::Isometry3d Pose6D::to_isometry() const {
  Eigen::Isometry3d m = Eigen::Isometry3d::Identity();
  m.linear() = rotvec_to_matrix(r);
  m.translation() = t;
  return m;
}

Pose6D Pose6D::from_isometry(const Eigen::Isometry3d& m) {
  return {m.translation(), matrix_to_rotvec(m.linear())};
}

void Trajectory::validate() const {
  if (samples.size() < 2) throw ValidationError("trajectory must hold at least 2 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].t) || !samples[i].pose.finite())
      throw ValidationError("trajectory sample " + std::to_string(i) + " is not finite");
    if (i > 0 && !(samples[i].t > samples[i - 1].t))
      throw ValidationError("timestamps not strictly increasing at sample " + std::to_string(i));
  }
}

Eigen::Matrix3d rotvec_to_matrix(const Vec3& r) {
  if (!r.allFinite()) throw InvalidInputError("rotation vector is not finite");
  const double theta2 = r.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a, b;  // sin(t)/t and (1-cos(t))/t^2
  if (theta < 1e-8) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Eigen::Matrix3d k = skew(r);
  return Eigen::Matrix3d::Identity() + a * k + b * (k * k);
}

Vec3 matrix_to_rotvec(const Eigen::Matrix3d& m) {
  if (!m.allFinite()) throw InvalidInputError("rotation matrix is not finite");
  // w = sin(theta) * axis from the skew part, c = cos(theta) from the trace.
  const Vec3 w(0.5 * (m(2, 1) - m(1, 2)),
               0.5 * (m(0, 2) - m(2, 0)),
               0.5 * (m(1, 0) - m(0, 1)));
  const double s = w.norm();
  const double c = std::clamp(0.5 * (m.trace() - 1.0), -1.0, 1.0);
  const double theta = std::atan2(s, c);

  if (s > 1e-6) {
    Vec3 r = w * (theta / s);
    if (theta > M_PI - 1e-12) {
      // exactly-pi tie: pick the representative with the first nonzero
      // axis component positive
      for (int i = 0; i < 3; ++i) {
        if (std::abs(r[i]) > 1e-12) {
          if (r[i] < 0) r = -r;
          break;
        }
      }
    }
    return r;
  }
  if (c > 0.0) {
    // small angle: theta/sin(theta) ~ 1 + theta^2/6
    return w * (1.0 + theta * theta / 6.0);
  }
  // theta near pi: recover the axis from the symmetric part,
  // aa^T = (S - cos(theta) I) / (1 - cos(theta))
  const Eigen::Matrix3d sym = 0.5 * (m + m.transpose());
  const Eigen::Matrix3d aat = (sym - c * Eigen::Matrix3d::Identity()) / (1.0 - c);
  int k = 0;
  aat.diagonal().maxCoeff(&k);
  Vec3 axis;
  axis[k] = std::sqrt(std::max(0.0, aat(k, k)));
  for (int i = 0; i < 3; ++i)
    if (i != k) axis[i] = aat(i, k) / axis[k];
  axis.normalize();
  if (axis.dot(w) < 0) axis = -axis;
  if (s < 1e-12) {
    for (int i = 0; i < 3; ++i) {
      if (std::abs(axis[i]) > 1e-12) {
        if (axis[i] < 0) axis = -axis;
        break;
      }
    }
  }
  return axis * theta;
}

Trajectory smooth_moving_average(const Trajectory& traj, int window) {
  const int n = static_cast<int>(traj.size());
  if (window < 1 || window > n)
    throw InvalidInputError("smoothing window must be in [1, trajectory length]");
  const int radius = window / 2;
  Trajectory out = traj;
  for (int i = 0; i < n; ++i) {
    const int ri = std::min({radius, i, n - 1 - i});
    Vec6 acc = Vec6::Zero();
    for (int j = i - ri; j <= i + ri; ++j) acc += traj[j].pose.to_vec6();
    out[i].pose = Pose6D::from_vec6(acc / double(2 * ri + 1));
  }
  return out;
}

Trajectory to_mandrel_frame(const Trajectory& device, const Trajectory& mandrel) {
  if (device.frame != Frame::Camera || mandrel.frame != Frame::Camera)
    throw InvalidInputError("frame transform expects camera-frame trajectories");
  if (device.size() != mandrel.size())
    throw AlignmentError("device and mandrel trajectories differ in length");
  Trajectory out;
  out.frame = Frame::Mandrel;
  out.samples.reserve(device.size());
  for (std::size_t i = 0; i < device.size(); ++i) {
    if (std::abs(device[i].t - mandrel[i].t) > 1e-9)
      throw AlignmentError("device/mandrel timestamp mismatch at sample " + std::to_string(i));
    const Eigen::Isometry3d rel =
        mandrel[i].pose.to_isometry().inverse() * device[i].pose.to_isometry();
    out.samples.push_back({device[i].t, Pose6D::from_isometry(rel)});
  }
  return out;
}

}  // namespace csrl
