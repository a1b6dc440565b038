#include "csrl/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace csrl {

WarpPath dtw(const std::vector<Eigen::VectorXd>& a, const std::vector<Eigen::VectorXd>& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  if (n == 0 || m == 0) throw InvalidInputError("dtw requires non-empty sequences");

  Eigen::MatrixXd acc(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double d = (a[i] - b[j]).norm();
      double prev;
      if (i == 0 && j == 0) prev = 0.0;
      else if (i == 0) prev = acc(0, j - 1);
      else if (j == 0) prev = acc(i - 1, 0);
      else prev = std::min({acc(i - 1, j - 1), acc(i - 1, j), acc(i, j - 1)});
      acc(i, j) = d + prev;
    }
  }

  WarpPath path;
  path.cost = acc(n - 1, m - 1);
  int i = n - 1, j = m - 1;
  path.pairs.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i == 0) --j;
    else if (j == 0) --i;
    else {
      const double diag = acc(i - 1, j - 1);
      const double up = acc(i - 1, j);
      const double left = acc(i, j - 1);
      if (diag <= up && diag <= left) { --i; --j; }
      else if (up <= left) --i;
      else --j;
    }
    path.pairs.emplace_back(i, j);
  }
  std::reverse(path.pairs.begin(), path.pairs.end());
  return path;
}

namespace {

std::vector<Eigen::VectorXd> standardized(const Trajectory& traj, const Vec6& scale) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(traj.size());
  for (const auto& s : traj.samples)
    out.emplace_back(s.pose.to_vec6().cwiseProduct(scale));
  return out;
}

}  // namespace

std::vector<Trajectory> align_set(const std::vector<Trajectory>& demos) {
  if (demos.empty()) throw InvalidInputError("align_set requires at least one trajectory");
  for (const auto& d : demos) {
    if (d.frame != Frame::Mandrel)
      throw InvalidInputError("align_set expects mandrel-frame trajectories");
    if (d.size() < 2) throw InvalidInputError("align_set requires trajectories of length >= 2");
  }
  if (demos.size() == 1) return demos;

  // a set whose lengths already agree is taken as aligned; this makes
  // alignment a projection (aligning twice equals aligning once)
  bool all_equal = true;
  for (const auto& d : demos)
    if (d.size() != demos.front().size()) all_equal = false;
  if (all_equal) return demos;

  // global per-component standard deviation, used to make the DoF commensurate
  Vec6 sum = Vec6::Zero(), sumsq = Vec6::Zero();
  std::size_t total = 0;
  for (const auto& d : demos) {
    for (const auto& s : d.samples) {
      const Vec6 v = s.pose.to_vec6();
      sum += v;
      sumsq += v.cwiseProduct(v);
      ++total;
    }
  }
  const Vec6 meanv = sum / double(total);
  Vec6 scale;
  for (int c = 0; c < 6; ++c) {
    const double var = std::max(0.0, sumsq[c] / double(total) - meanv[c] * meanv[c]);
    const double sd = std::sqrt(var);
    scale[c] = sd > 1e-12 ? 1.0 / sd : 1.0;
  }

  // reference = median-length demo, ties to the lower index
  std::vector<std::size_t> lengths;
  for (const auto& d : demos) lengths.push_back(d.size());
  std::vector<std::size_t> sorted = lengths;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t median_len = sorted[(sorted.size() - 1) / 2];
  const std::size_t ref_idx =
      std::find(lengths.begin(), lengths.end(), median_len) - lengths.begin();
  const Trajectory& ref = demos[ref_idx];
  const auto ref_std = standardized(ref, scale);

  std::vector<Trajectory> out(demos.size());
  for (std::size_t d = 0; d < demos.size(); ++d) {
    if (d == ref_idx) {
      out[d] = demos[d];
      continue;
    }
    const WarpPath path = dtw(standardized(demos[d], scale), ref_std);
    Trajectory warped;
    warped.frame = Frame::Mandrel;
    warped.samples.resize(ref.size());
    std::vector<int> hits(ref.size(), 0);
    std::vector<Vec6> acc(ref.size(), Vec6::Zero());
    for (const auto& [i, j] : path.pairs) {
      acc[j] += demos[d][i].pose.to_vec6();
      ++hits[j];
    }
    for (std::size_t j = 0; j < ref.size(); ++j) {
      warped.samples[j].t = ref[j].t;
      warped.samples[j].pose = Pose6D::from_vec6(acc[j] / double(hits[j]));
    }
    out[d] = std::move(warped);
  }
  return out;
}

MeanVarModel build_model(const std::vector<Trajectory>& aligned) {
  if (aligned.empty()) throw InvalidInputError("build_model requires at least one trajectory");
  const std::size_t len = aligned.front().size();
  if (len < 2) throw InvalidInputError("build_model requires trajectories of length >= 2");
  for (const auto& d : aligned)
    if (d.size() != len) throw InvalidInputError("build_model requires equal-length trajectories");

  const double n = double(aligned.size());
  MeanVarModel model;
  model.count = static_cast<int>(aligned.size());
  model.mean.resize(len);
  model.sigma.resize(len);
  for (std::size_t k = 0; k < len; ++k) {
    Vec6 mean = Vec6::Zero();
    for (const auto& d : aligned) mean += d[k].pose.to_vec6();
    mean /= n;
    Vec6 var = Vec6::Zero();
    for (const auto& d : aligned) {
      const Vec6 diff = d[k].pose.to_vec6() - mean;
      var += diff.cwiseProduct(diff);
    }
    var /= n;  // population variance
    model.mean[k] = Pose6D::from_vec6(mean);
    model.sigma[k] = var.cwiseSqrt();
  }
  return model;
}

}  // namespace csrl
