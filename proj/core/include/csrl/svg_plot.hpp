#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "csrl/geometry.hpp"
#include "csrl/metrics.hpp"

namespace csrl {

/// Bar chart of pose length, joint length and smoothness per trajectory,
/// one panel per metric.
void write_metric_bars_svg(const std::filesystem::path& path,
                           const std::vector<TrajectoryReport>& reports);

/// Six stacked panels (x, y, z, rx, ry, rz over sample index) with one
/// polyline per trajectory.
void write_dof_traces_svg(const std::filesystem::path& path,
                          const std::vector<std::string>& labels,
                          const std::vector<Trajectory>& trajectories);

}  // namespace csrl
