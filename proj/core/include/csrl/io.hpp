#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "csrl/alignment.hpp"
#include "csrl/environment.hpp"
#include "csrl/geometry.hpp"
#include "csrl/kinematics.hpp"
#include "csrl/metrics.hpp"
#include "csrl/rl.hpp"

namespace csrl {

/// Shortest decimal representation that round-trips the exact double, so
/// written artifacts are reproducible bit for bit.
std::string format_double(double v);

/// FNV-1a 64-bit hash of a file's bytes, as a hex string.
std::string file_hash(const std::filesystem::path& path);

// Demonstration CSV: header
//   t,dx,dy,dz,drx,dry,drz,mx,my,mz,mrx,mry,mrz
// one demonstration per file, device then mandrel pose per sample.
void write_demo_csv(const std::filesystem::path& path, const Demo& demo);
Demo read_demo_csv(const std::filesystem::path& path);

// Pose trajectory CSV: header t,x,y,z,rx,ry,rz
void write_pose_csv(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_pose_csv(const std::filesystem::path& path, Frame frame);

// Joint trajectory CSV: header t,q1..q7
void write_joints_csv(const std::filesystem::path& path, const std::vector<JointState>& joints);
std::vector<JointState> read_joints_csv(const std::filesystem::path& path);

// Model JSON: { "length": T, "mean": [[6]...], "sigma": [[6]...], "count": n }
void write_model_json(const std::filesystem::path& path, const MeanVarModel& model);
MeanVarModel read_model_json(const std::filesystem::path& path);

// Arm + scene + mandrel placement config (JSON)
struct ArmSceneConfig {
  ArmModel arm;
  Scene scene;
  Eigen::Isometry3d mandrel_in_base = Eigen::Isometry3d::Identity();
};
ArmSceneConfig default_arm_scene();
void write_arm_scene_json(const std::filesystem::path& path, const ArmSceneConfig& cfg);
ArmSceneConfig read_arm_scene_json(const std::filesystem::path& path);

// Training checkpoint: network (and target), buffer, RNG stream, progress.
// Restoring and continuing reproduces an uninterrupted run bit for bit.
struct Checkpoint {
  std::vector<int> layer_sizes;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  bool has_target = false;
  std::vector<Eigen::MatrixXd> target_weights;
  std::vector<Eigen::VectorXd> target_biases;
  std::string rng_state;
  std::uint64_t train_steps = 0;
  int episodes_done = 0;
  std::uint64_t envelope_violations = 0;
  std::uint64_t action_set_mismatches = 0;
  TrainConfig cfg;
};
Checkpoint snapshot(const TrainContext& ctx);
void restore(const Checkpoint& cp, TrainContext& ctx);
void write_checkpoint_json(const std::filesystem::path& path, const Checkpoint& cp);
Checkpoint read_checkpoint_json(const std::filesystem::path& path);

void write_buffer_json(const std::filesystem::path& path, const ExperienceBuffer& buffer);
void read_buffer_json(const std::filesystem::path& path, ExperienceBuffer& buffer);

// Episode CSV log: header episode,return,steps,collisions,epsilon
void append_episode_log(const std::filesystem::path& path, const EpisodeStats& stats);
void ensure_episode_log(const std::filesystem::path& path);  // create header-only file

// Metric reports
void write_reports_csv(const std::filesystem::path& path,
                       const std::vector<TrajectoryReport>& reports);
void write_reports_json(const std::filesystem::path& path,
                        const std::vector<TrajectoryReport>& reports);

}  // namespace csrl
