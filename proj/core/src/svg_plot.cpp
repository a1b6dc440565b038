#include "csrl/svg_plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "csrl/error.hpp"

namespace csrl {

namespace {

constexpr const char* kColors[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                   "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
                                   "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd"};

std::string short_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::ofstream open_svg(const std::filesystem::path& path, int width, int height) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "' font-family='sans-serif' font-size='11'>\n";
  return out;
}

}  // namespace

void write_metric_bars_svg(const std::filesystem::path& path,
                           const std::vector<TrajectoryReport>& reports) {
  const int n = static_cast<int>(reports.size());
  if (n == 0) throw InvalidInputError("no reports to plot");
  const int panel_w = 360, panel_h = 220, margin = 45;
  const int width = 3 * panel_w + 40, height = panel_h + 80;
  auto out = open_svg(path, width, height);

  const char* titles[3] = {"pose length [m]", "joint length [deg]", "smoothness [deg]"};
  for (int p = 0; p < 3; ++p) {
    const int x0 = p * panel_w + margin;
    const int y0 = 30, y1 = y0 + panel_h - 60;
    double vmax = 0.0;
    for (const auto& r : reports) {
      const double v = p == 0 ? r.pose_length_m : p == 1 ? r.joint_length_deg : r.smoothness_deg;
      vmax = std::max(vmax, v);
    }
    if (vmax <= 0.0) vmax = 1.0;
    out << "<text x='" << x0 << "' y='18'>" << titles[p] << "</text>\n";
    out << "<line x1='" << x0 << "' y1='" << y1 << "' x2='" << x0 + panel_w - 2 * margin
        << "' y2='" << y1 << "' stroke='#333'/>\n";
    const double bw = static_cast<double>(panel_w - 2 * margin) / n;
    for (int i = 0; i < n; ++i) {
      const auto& r = reports[i];
      const double v = p == 0 ? r.pose_length_m : p == 1 ? r.joint_length_deg : r.smoothness_deg;
      const double h = (y1 - y0) * v / vmax;
      out << "<rect x='" << x0 + i * bw + 2 << "' y='" << y1 - h << "' width='" << bw - 4
          << "' height='" << h << "' fill='" << kColors[i % 15] << "'/>\n";
      out << "<text x='" << x0 + i * bw + bw / 2 << "' y='" << y1 + 14
          << "' text-anchor='middle' font-size='9'>" << r.label << "</text>\n";
      out << "<text x='" << x0 + i * bw + bw / 2 << "' y='" << y1 - h - 3
          << "' text-anchor='middle' font-size='8'>" << short_label(v) << "</text>\n";
    }
  }
  out << "</svg>\n";
}

void write_dof_traces_svg(const std::filesystem::path& path,
                          const std::vector<std::string>& labels,
                          const std::vector<Trajectory>& trajectories) {
  if (trajectories.empty()) throw InvalidInputError("no trajectories to plot");
  if (labels.size() != trajectories.size())
    throw InvalidInputError("labels/trajectories size mismatch");

  const int panel_w = 720, panel_h = 130, margin = 50;
  const int width = panel_w + margin + 160, height = 6 * panel_h + 40;
  auto out = open_svg(path, width, height);
  const char* names[6] = {"x [m]", "y [m]", "z [m]", "rx [rad]", "ry [rad]", "rz [rad]"};

  for (int c = 0; c < 6; ++c) {
    double lo = 1e300, hi = -1e300;
    std::size_t longest = 0;
    for (const auto& t : trajectories) {
      longest = std::max(longest, t.size());
      for (const auto& s : t.samples) {
        const double v = s.pose.to_vec6()[c];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (hi - lo < 1e-12) hi = lo + 1.0;
    const int y0 = c * panel_h + 20, y1 = y0 + panel_h - 30;
    out << "<text x='6' y='" << (y0 + y1) / 2 << "'>" << names[c] << "</text>\n";
    out << "<rect x='" << margin << "' y='" << y0 << "' width='" << panel_w << "' height='"
        << y1 - y0 << "' fill='none' stroke='#ccc'/>\n";
    for (std::size_t k = 0; k < trajectories.size(); ++k) {
      const auto& t = trajectories[k];
      out << "<polyline fill='none' stroke='" << kColors[k % 15] << "' stroke-width='1' points='";
      for (std::size_t i = 0; i < t.size(); ++i) {
        const double x = margin + panel_w * (t.size() > 1 ? double(i) / (longest - 1) : 0.0);
        const double v = t[i].pose.to_vec6()[c];
        const double y = y1 - (y1 - y0) * (v - lo) / (hi - lo);
        out << x << ',' << y << ' ';
      }
      out << "'/>\n";
    }
  }
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const int y = 30 + static_cast<int>(k) * 14;
    out << "<rect x='" << margin + panel_w + 12 << "' y='" << y - 8
        << "' width='10' height='10' fill='" << kColors[k % 15] << "'/>\n";
    out << "<text x='" << margin + panel_w + 26 << "' y='" << y << "'>" << labels[k]
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace csrl
