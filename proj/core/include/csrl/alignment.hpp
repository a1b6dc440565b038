#pragma once

#include <utility>
#include <vector>

#include "csrl/geometry.hpp"

namespace csrl {

/// Monotone warp between two sequences: starts at (0,0), ends at
/// (len(a)-1, len(b)-1), each step advances i, j, or both by one.
struct WarpPath {
  std::vector<std::pair<int, int>> pairs;
  double cost = 0.0;
};

/// Per-step statistics over temporally aligned demonstrations. sigma holds the
/// population standard deviation of each of the six pose components.
struct MeanVarModel {
  std::vector<Pose6D> mean;
  std::vector<Vec6> sigma;
  int count = 0;

  int length() const { return static_cast<int>(mean.size()); }
};

/// Dynamic time warping with the classic symmetric step pattern and no window
/// constraint. Distance between samples is the Euclidean norm of their
/// difference; cost is the sum of distances over every cell the path visits.
/// Backtracking prefers the diagonal step on ties.
WarpPath dtw(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b);

/// Warp every demonstration onto a common timeline. The reference is the
/// median-length demo (ties resolved to the lower index); DTW distances are
/// computed on per-component globally standardized values so meters and
/// radians weigh equally. Where several source samples map to one reference
/// index their componentwise mean is taken.
std::vector<Trajectory> align_set(const std::vector<Trajectory>& demos);

/// Componentwise mean and population standard deviation at each temporal index.
MeanVarModel build_model(const std::vector<Trajectory>& aligned);

}  // namespace csrl
