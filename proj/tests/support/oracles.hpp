// Independent reference implementations used only by tests: brute-force DTW,
// a deterministic grid world with value iteration, and random-input helpers.
#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracles {

// ---- exhaustive DTW over all monotone paths -------------------------------

inline double brute_force_dtw(const std::vector<double>& a, const std::vector<double>& b) {
  const int n = static_cast<int>(a.size()), m = static_cast<int>(b.size());
  double best = std::numeric_limits<double>::infinity();
  // depth-first over steps {down, right, diagonal}, accumulating visited cells
  std::function<void(int, int, double)> walk = [&](int i, int j, double cost) {
    cost += std::abs(a[i] - b[j]);
    if (i == n - 1 && j == m - 1) {
      best = std::min(best, cost);
      return;
    }
    if (i + 1 < n) walk(i + 1, j, cost);
    if (j + 1 < m) walk(i, j + 1, cost);
    if (i + 1 < n && j + 1 < m) walk(i + 1, j + 1, cost);
  };
  walk(0, 0, 0.0);
  return best;
}

// ---- deterministic 4x4 grid world -----------------------------------------

// States are cells row-major; actions up/down/left/right; moving into a wall
// keeps the agent in place. Reaching the goal pays +10 and ends the episode,
// every other move pays -1.
struct GridWorld {
  static constexpr int kSide = 4;
  static constexpr int kStates = kSide * kSide;
  static constexpr int kActions = 4;
  int goal = kStates - 1;

  bool terminal(int s) const { return s == goal; }

  int next_state(int s, int a) const {
    const int row = s / kSide, col = s % kSide;
    int r2 = row, c2 = col;
    switch (a) {
      case 0: r2 = std::max(0, row - 1); break;
      case 1: r2 = std::min(kSide - 1, row + 1); break;
      case 2: c2 = std::max(0, col - 1); break;
      case 3: c2 = std::min(kSide - 1, col + 1); break;
    }
    return r2 * kSide + c2;
  }

  double reward(int s, int a) const { return next_state(s, a) == goal ? 10.0 : -1.0; }
};

// Q* by value iteration to a tight fixed point; terminal state valued 0.
inline std::vector<std::vector<double>> value_iteration(const GridWorld& world, double gamma,
                                                        double tol = 1e-13) {
  std::vector<std::vector<double>> q(GridWorld::kStates,
                                     std::vector<double>(GridWorld::kActions, 0.0));
  for (int sweep = 0; sweep < 100000; ++sweep) {
    double delta = 0.0;
    for (int s = 0; s < GridWorld::kStates; ++s) {
      if (world.terminal(s)) continue;
      for (int a = 0; a < GridWorld::kActions; ++a) {
        const int s2 = world.next_state(s, a);
        double boot = 0.0;
        if (!world.terminal(s2)) boot = *std::max_element(q[s2].begin(), q[s2].end());
        const double updated = world.reward(s, a) + gamma * boot;
        delta = std::max(delta, std::abs(updated - q[s][a]));
        q[s][a] = updated;
      }
    }
    if (delta < tol) break;
  }
  return q;
}

// ---- random-input helpers --------------------------------------------------

inline Eigen::Vector3d random_rotvec(std::mt19937_64& rng, double max_angle = 0.97 * M_PI) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, max_angle);
  Eigen::Vector3d axis(g(rng), g(rng), g(rng));
  while (axis.norm() < 1e-6) axis = Eigen::Vector3d(g(rng), g(rng), g(rng));
  return axis.normalized() * u(rng);
}

inline Eigen::Vector3d random_vec3(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace oracles
