#include "csrl/workspace.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace csrl {

bool Grid::contains(const Vec3& p) const {
  const Vec3 hi = origin + extent();
  return (p.array() >= origin.array()).all() && (p.array() <= hi.array()).all();
}

Eigen::Vector3i Grid::cell_of(const Vec3& p) const {
  if (!contains(p)) throw InvalidInputError("point outside grid");
  Eigen::Vector3i c;
  for (int i = 0; i < 3; ++i)
    c[i] = std::min(dims[i] - 1, static_cast<int>(std::floor((p[i] - origin[i]) / step)));
  return c;
}

Grid build_grid(const MeanVarModel& model, double delta) {
  if (delta <= 0.0) throw ConfigError("grid step size must be positive");
  if (model.length() == 0) throw InvalidInputError("empty model");

  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (int k = 0; k < model.length(); ++k) {
    const Vec3 s = model.sigma[k].head<3>();
    lo = lo.cwiseMin(model.mean[k].t - s);
    hi = hi.cwiseMax(model.mean[k].t + s);
  }

  Grid g;
  g.step = delta;
  g.origin = lo - Vec3::Constant(delta);
  for (int i = 0; i < 3; ++i) {
    const double extent = hi[i] - lo[i];
    const int core = std::max(1, static_cast<int>(std::ceil(extent / delta - 1e-9)));
    g.dims[i] = core + 2;
  }
  return g;
}

namespace {

constexpr double kLevels[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};

void check_step_index(const MeanVarModel& model, int k) {
  if (k < 0 || k >= model.length() - 1)
    throw std::out_of_range("action step index out of range");
}

}  // namespace

ActionSet action_targets(const MeanVarModel& model, int k, const Vec3& current) {
  check_step_index(model, k);
  const Vec3 mean = model.mean[k + 1].t;
  const Vec3 sigma = model.sigma[k + 1].head<3>();

  ActionSet set;
  set.targets.reserve(kActionCount);
  set.targets.push_back(current);
  for (double lx : kLevels)
    for (double ly : kLevels)
      for (double lz : kLevels)
        set.targets.emplace_back(mean.x() + lx * sigma.x(),
                                 mean.y() + ly * sigma.y(),
                                 mean.z() + lz * sigma.z());
  return set;
}

ActionSet action_targets_random(const MeanVarModel& model, int k, const Vec3& current,
                                std::mt19937_64& rng) {
  check_step_index(model, k);
  const Vec3 mean = model.mean[k + 1].t;
  const Vec3 sigma = model.sigma[k + 1].head<3>();

  ActionSet set;
  set.targets.reserve(kActionCount);
  set.targets.push_back(current);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 1; i < kActionCount; ++i) {
    Vec3 p;
    for (int c = 0; c < 3; ++c) p[c] = mean[c] + u(rng) * sigma[c];
    set.targets.push_back(p);
  }
  return set;
}

}  // namespace csrl
