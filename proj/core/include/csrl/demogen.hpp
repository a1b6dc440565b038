#pragma once

#include <array>
#include <cstdint>

#include "csrl/geometry.hpp"

namespace csrl {

/// Synthetic demonstration generator. Produces noisy 6-DoF device/mandrel
/// pose streams shaped like a single-handed stitching cycle: approach the
/// slot, pierce in and pass, return to the start.
struct DemoGenConfig {
  int n_demos = 10;
  int base_samples = 150;       // samples of the noiseless base trajectory
  double dt = 1.0 / 30.0;       // sampling period, seconds

  // waypoints of the three motion primitives, in the mandrel frame
  std::array<std::vector<Pose6D>, 3> primitives;

  Vec3 noise_sigma_t{0.0015, 0.0015, 0.0015};  // additive position noise, meters
  double noise_sigma_r = 0.008;                // additive rotation-vector noise, radians
  double time_warp = 0.15;                     // 0 disables temporal distortion
  double burst_prob = 0.3;                     // chance of one redundant detour per demo
  double burst_amplitude = 0.006;              // detour size, meters
  double mandrel_drift = 0.003;                // mandrel wander in the camera frame, meters
  std::uint64_t seed = 1;

  static DemoGenConfig defaults();
};

/// Deterministic per seed. The noiseless base path is the config's waypoints
/// interpolated with a Catmull-Rom spline; each demo adds temporal warping,
/// Gaussian pose noise and optional redundant detours, then is composed with
/// a drifting mandrel trajectory to produce the camera-frame streams.
DemoSet generate(const DemoGenConfig& config);

/// The noiseless interpolated mandrel-frame trajectory the demos are built from.
Trajectory base_trajectory(const DemoGenConfig& config);

}  // namespace csrl
