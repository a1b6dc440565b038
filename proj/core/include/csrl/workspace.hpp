#pragma once

#include <random>
#include <vector>

#include "csrl/alignment.hpp"
#include "csrl/geometry.hpp"

namespace csrl {

// 5x5x5 offset lattice plus the stationary action
inline constexpr int kActionCount = 126;
inline constexpr int kStationaryAction = 0;

/// Axis-aligned discretization of the search volume. The box spans
/// [origin, origin + dims * step] and encloses the mean +/- sigma envelope
/// with one cell of padding on every side.
struct Grid {
  Vec3 origin{Vec3::Zero()};
  double step = 0.0;
  Eigen::Vector3i dims{Eigen::Vector3i::Zero()};

  Vec3 extent() const { return dims.cast<double>() * step; }
  bool contains(const Vec3& p) const;
  /// Cell coordinate of a contained point; throws InvalidInputError outside.
  Eigen::Vector3i cell_of(const Vec3& p) const;
};

/// The 126 candidate target points for one model step. Index 0 is the
/// stationary action (the agent's current position); indices 1..125 form a
/// 5x5x5 lattice at offsets {-1, -1/2, 0, 1/2, 1} * sigma per axis around the
/// next mean translation.
struct ActionSet {
  std::vector<Vec3> targets;

  int size() const { return static_cast<int>(targets.size()); }
  const Vec3& operator[](int a) const { return targets[a]; }
};

Grid build_grid(const MeanVarModel& model, double delta);

ActionSet action_targets(const MeanVarModel& model, int k, const Vec3& current);

/// Variant with the 125 points drawn uniformly inside the sigma box instead of
/// on the fixed lattice. Off by default in the pipeline.
ActionSet action_targets_random(const MeanVarModel& model, int k, const Vec3& current,
                                std::mt19937_64& rng);

}  // namespace csrl
