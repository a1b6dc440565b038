#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "csrl/demogen.hpp"
#include "csrl/environment.hpp"
#include "csrl/io.hpp"

namespace csrl {

/// Everything a full run needs; every Table-style hyperparameter is a named
/// default here and can be overridden from a JSON config file or CLI flags.
struct RunConfig {
  DemoGenConfig demo;
  int smoothing_window = 10;
  double delta = 0.002;          // grid step size
  std::vector<int> hidden = {400, 200};
  TrainConfig train;
  EnvParams env;
  std::string arm_scene_path;    // empty = built-in default arm and scene
  int checkpoint_every = 0;      // episodes between checkpoints; 0 = end only

  void apply_seed(std::uint64_t seed) {
    demo.seed = seed;
    train.seed = seed;
  }
};

RunConfig load_run_config(const std::filesystem::path& path);  // defaults + overrides
void write_run_config(const std::filesystem::path& path, const RunConfig& cfg);

/// Load the arm/scene referenced by the config, or the built-in default.
ArmSceneConfig resolve_arm_scene(const RunConfig& cfg);

struct DemoSummary {
  std::string file;
  std::size_t samples = 0;
  double duration_s = 0.0;
  double pose_length_m = 0.0;  // of the raw device stream
};

struct IngestResult {
  DemoSet set;
  std::vector<DemoSummary> summaries;
};

/// Parse and validate demonstration CSVs; file order is sorted for
/// reproducibility.
IngestResult cmd_ingest(std::vector<std::filesystem::path> files);

/// Generate synthetic demonstrations and write one CSV per demo plus a
/// manifest listing the files and the seed.
std::vector<std::filesystem::path> cmd_demogen(const RunConfig& cfg,
                                               const std::filesystem::path& out_dir);

/// smoothing -> mandrel-frame transform -> DTW alignment -> mean/variance
/// model, persisted as model.json in out_dir.
std::filesystem::path cmd_model(const DemoSet& set, const RunConfig& cfg,
                                const std::filesystem::path& out_dir);

struct TrainSummary {
  int episodes_run = 0;
  double final_epsilon = 0.0;
  double return_slope_last20 = 0.0;  // convergence indicator
  std::vector<EpisodeStats> stats;
  std::filesystem::path checkpoint;
  std::filesystem::path episode_log;
  std::uint64_t envelope_violations = 0;   // visited states outside mean +/- sigma
  std::uint64_t action_set_mismatches = 0; // action sets not exactly 126 entries
};

/// Full training loop over cfg.train.num_episodes episodes; writes
/// checkpoint.json, buffer.json, episodes.csv and manifest.json. With
/// resume = true continues from an existing checkpoint in out_dir and
/// reproduces an uninterrupted run bit for bit. stop_after > 0 interrupts
/// the run after that many episodes (the epsilon schedule still follows the
/// configured total).
TrainSummary cmd_train(const std::filesystem::path& model_path, const RunConfig& cfg,
                       const std::filesystem::path& out_dir, bool resume = false,
                       int stop_after = 0);

struct OptimizeResult {
  Rollout rollout;
  std::filesystem::path pose_csv;
  std::filesystem::path joints_csv;
};

/// Greedy rollout of a trained checkpoint; writes the optimized pose and
/// joint trajectories.
OptimizeResult cmd_optimize(const std::filesystem::path& checkpoint_path,
                            const std::filesystem::path& model_path, const RunConfig& cfg,
                            const std::filesystem::path& out_dir);

/// Metric reports for any mix of demonstration CSVs (13 columns) and pose
/// CSVs (7 columns). Demonstrations are reported first, optimized/pose files
/// last; joint lengths come from IK along each mandrel-frame trajectory.
std::vector<TrajectoryReport> cmd_evaluate(const std::vector<std::filesystem::path>& files,
                                           const RunConfig& cfg,
                                           const std::filesystem::path& out_dir,
                                           bool plots_only = false);

/// Environment plus the data it borrows, kept alive together.
struct EnvBundle {
  MeanVarModel model;
  Grid grid;
  ArmSceneConfig arm_scene;
  std::unique_ptr<Environment> env;

  EnvBundle() = default;
  EnvBundle(const EnvBundle&) = delete;
  EnvBundle& operator=(const EnvBundle&) = delete;
};

std::unique_ptr<EnvBundle> make_env(MeanVarModel model, const RunConfig& cfg);

/// Network input width / layer sizes implied by the config.
std::vector<int> network_layers(const RunConfig& cfg);

}  // namespace csrl
