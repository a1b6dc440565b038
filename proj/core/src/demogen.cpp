#include "csrl/demogen.hpp"

#include <cmath>
#include <random>

namespace csrl {

DemoGenConfig DemoGenConfig::defaults() {
  DemoGenConfig c;
  // a single stitching cycle, roughly 0.2 m of travel: approach the slot,
  // pierce in and pass, return to the rest pose
  c.primitives[0] = {
      {{0.044, -0.038, 0.050}, {0.00, 0.00, 0.00}},
      {{0.018, -0.012, 0.018}, {0.08, -0.03, 0.02}},
      {{0.005, 0.000, 0.005}, {0.16, -0.06, 0.05}},
  };
  c.primitives[1] = {
      {{0.000, 0.005, 0.000}, {0.24, -0.08, 0.08}},
      {{-0.005, 0.013, 0.003}, {0.30, -0.06, 0.10}},
      {{-0.002, 0.020, 0.010}, {0.24, -0.03, 0.08}},
  };
  c.primitives[2] = {
      {{0.012, 0.017, 0.030}, {0.14, 0.00, 0.04}},
      {{0.038, -0.024, 0.046}, {0.04, 0.01, 0.01}},
      {{0.044, -0.038, 0.050}, {0.00, 0.00, 0.00}},
  };
  return c;
}

namespace {

// uniform Catmull-Rom through the control points, clamped at the ends
class Spline6 {
 public:
  explicit Spline6(std::vector<Vec6> points) : pts_(std::move(points)) {
    if (pts_.size() < 2) throw ConfigError("spline needs at least two waypoints");
  }

  Vec6 eval(double u) const {
    const int segments = static_cast<int>(pts_.size()) - 1;
    const double x = std::clamp(u, 0.0, 1.0) * segments;
    const int seg = std::min(static_cast<int>(std::floor(x)), segments - 1);
    const double s = x - seg;
    const Vec6& p0 = pts_[std::max(seg - 1, 0)];
    const Vec6& p1 = pts_[seg];
    const Vec6& p2 = pts_[seg + 1];
    const Vec6& p3 = pts_[std::min(seg + 2, segments)];
    return 0.5 * ((2.0 * p1) + (-p0 + p2) * s + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * (s * s) +
                  (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * (s * s * s));
  }

 private:
  std::vector<Vec6> pts_;
};

Spline6 make_base_spline(const DemoGenConfig& config) {
  std::vector<Vec6> pts;
  for (const auto& primitive : config.primitives)
    for (const auto& wp : primitive) pts.push_back(wp.to_vec6());
  if (pts.size() < 2) throw ConfigError("demo generator needs at least two waypoints");
  for (std::size_t i = 1; i < pts.size(); ++i)
    if ((pts[i].head<3>() - pts[i - 1].head<3>()).norm() < 1e-9)
      throw ConfigError("coincident consecutive waypoints");
  return Spline6(std::move(pts));
}

}  // namespace

Trajectory base_trajectory(const DemoGenConfig& config) {
  if (config.base_samples < 2) throw ConfigError("base_samples must be at least 2");
  const Spline6 spline = make_base_spline(config);
  Trajectory traj;
  traj.frame = Frame::Mandrel;
  traj.samples.resize(config.base_samples);
  for (int j = 0; j < config.base_samples; ++j) {
    const double u = static_cast<double>(j) / (config.base_samples - 1);
    traj.samples[j] = {j * config.dt, Pose6D::from_vec6(spline.eval(u))};
  }
  return traj;
}

DemoSet generate(const DemoGenConfig& config) {
  if (config.n_demos < 1) throw ConfigError("n_demos must be at least 1");
  if ((config.noise_sigma_t.array() < 0.0).any() || config.noise_sigma_r < 0.0)
    throw ConfigError("noise sigma must be non-negative");
  const Spline6 spline = make_base_spline(config);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> u11(-1.0, 1.0);

  DemoSet set;
  set.demos.reserve(config.n_demos);
  for (int d = 0; d < config.n_demos; ++d) {
    std::normal_distribution<double> gauss(0.0, 1.0);

    // temporal distortion: vary the demo length and the local pace
    const int n = std::max(
        2, static_cast<int>(std::lround(config.base_samples * (1.0 + config.time_warp * u11(rng)))));
    std::vector<double> params(n);
    params[0] = 0.0;
    for (int j = 1; j < n; ++j)
      params[j] = params[j - 1] + 1.0 + config.time_warp * u11(rng);
    for (int j = 0; j < n; ++j) params[j] /= params[n - 1];

    // optional redundant detour: a raised-cosine bump in a random direction
    const bool burst = u01(rng) < config.burst_prob;
    const double burst_center = 0.2 + 0.6 * u01(rng);
    const double burst_halfwidth = (6.0 + 8.0 * u01(rng)) / config.base_samples;
    Vec3 burst_dir(gauss(rng), gauss(rng), gauss(rng));
    burst_dir = burst_dir.norm() > 1e-9 ? Vec3(burst_dir.normalized()) : Vec3::UnitX();
    const double burst_amp = config.burst_amplitude * (0.5 + u01(rng));

    Trajectory rel;
    rel.frame = Frame::Mandrel;
    rel.samples.resize(n);
    for (int j = 0; j < n; ++j) {
      Vec6 v = spline.eval(params[j]);
      if (burst) {
        const double x = (params[j] - burst_center) / burst_halfwidth;
        if (std::abs(x) < 1.0) v.head<3>() += burst_dir * burst_amp * 0.5 * (1.0 + std::cos(M_PI * x));
      }
      for (int c = 0; c < 3; ++c) v[c] += config.noise_sigma_t[c] * gauss(rng);
      for (int c = 3; c < 6; ++c) v[c] += config.noise_sigma_r * gauss(rng);
      rel.samples[j] = {j * config.dt, Pose6D::from_vec6(v)};
    }

    // slow mandrel wander in the camera frame
    const double phase_x = 2.0 * M_PI * u01(rng);
    const double phase_y = 2.0 * M_PI * u01(rng);
    const double phase_z = 2.0 * M_PI * u01(rng);
    const double duration = (n - 1) * config.dt;

    Demo demo;
    demo.device.frame = Frame::Camera;
    demo.mandrel.frame = Frame::Camera;
    demo.device.samples.resize(n);
    demo.mandrel.samples.resize(n);
    for (int j = 0; j < n; ++j) {
      const double tau = duration > 0.0 ? rel.samples[j].t / duration : 0.0;
      Pose6D mandrel;
      mandrel.t = config.mandrel_drift *
                  Vec3(std::sin(2.0 * M_PI * tau + phase_x),
                       std::sin(2.0 * M_PI * 0.7 * tau + phase_y),
                       std::sin(2.0 * M_PI * 1.3 * tau + phase_z));
      mandrel.r = 5.0 * config.mandrel_drift *
                  Vec3(std::sin(2.0 * M_PI * 0.5 * tau + phase_y),
                       std::sin(2.0 * M_PI * 0.9 * tau + phase_z),
                       std::sin(2.0 * M_PI * 1.1 * tau + phase_x));
      const Eigen::Isometry3d device_pose =
          mandrel.to_isometry() * rel.samples[j].pose.to_isometry();
      demo.mandrel.samples[j] = {rel.samples[j].t, mandrel};
      demo.device.samples[j] = {rel.samples[j].t, Pose6D::from_isometry(device_pose)};
    }
    set.demos.push_back(std::move(demo));
  }
  return set;
}

}  // namespace csrl
