#pragma once

#include <optional>

#include "csrl/alignment.hpp"
#include "csrl/kinematics.hpp"
#include "csrl/rl.hpp"
#include "csrl/workspace.hpp"

namespace csrl {

struct EnvParams {
  double collision_penalty = -10.0;
  double reward_constant = 10.0;
  double envelope_tol = 1e-12;
  IkParams ik;
  bool random_action_sampling = false;  // draw the 125 targets instead of using the lattice
};

struct EnvState {
  Vec3 position{Vec3::Zero()};
  int k = 0;
  JointState joints = JointState::Zero();
  std::optional<Vec3> prev_position;
};

struct StepOutcome {
  EnvState next;
  double reward = 0.0;
  bool terminal = false;
  bool collided = false;
};

/// Four-term step reward:
///   - delta_phi_deg / 7                     joint movement
///   - |s' - s| / mean segment length        relative displacement
///   - angle(prev->s, s->s')                 turn angle, radians
///   + constant
/// The turn angle is 0 when there is no previous position or either direction
/// vector is shorter than 1e-12.
double reward_value(double delta_phi_deg, const Vec3& s, const Vec3& s_next,
                    const std::optional<Vec3>& prev, double mean_seg_len, double constant = 10.0);

/// Rotation of the mean sample closest in translation; ties resolve to the
/// lower index.
Vec3 nearest_mean_orientation(const MeanVarModel& model, const Vec3& position);

/// Episodic MDP over the variance-bounded workspace. Positions live in the
/// mandrel frame; IK targets are mapped through mandrel_in_base.
class Environment {
 public:
  Environment(const MeanVarModel& model, const Grid& grid, const ArmModel& arm, const Scene& scene,
              const Eigen::Isometry3d& mandrel_in_base, EnvParams params);

  const MeanVarModel& model() const { return *model_; }
  const Grid& grid() const { return *grid_; }
  const EnvParams& params() const { return params_; }
  int horizon() const { return model_->length() - 1; }
  int input_dim(bool translation_only) const { return translation_only ? 3 : 4; }

  /// Start of the mean trajectory; the initial joint state is solved from the
  /// arm's home posture. Throws when that solve fails.
  EnvState reset() const;

  ActionSet targets(const EnvState& s, std::mt19937_64* rng = nullptr) const;

  /// An action is valid when its target lies inside the grid and inside the
  /// next step's mean +/- sigma envelope (this is what keeps every visited
  /// state within the variance bound). The lattice actions always qualify;
  /// the stationary action may not.
  std::vector<std::uint8_t> valid_mask(const EnvState& s, const ActionSet& acts) const;

  StepOutcome step(const EnvState& s, int action, const ActionSet& acts) const;

  Eigen::VectorXd encode_state(const EnvState& s, bool translation_only) const;

  bool in_envelope(const Vec3& position, int k) const;

  /// how often the reward fell back to a neighboring mean segment length
  std::uint64_t degenerate_segment_uses() const { return degenerate_segment_uses_; }

 private:
  double mean_segment_length(int k) const;

  const MeanVarModel* model_;
  const Grid* grid_;
  const ArmModel* arm_;
  const Scene* scene_;
  Eigen::Isometry3d mandrel_in_base_;
  EnvParams params_;
  mutable std::uint64_t degenerate_segment_uses_ = 0;
};

struct TrainContext {
  QNetwork net;
  std::optional<QNetwork> target;
  ExperienceBuffer buffer;
  std::mt19937_64 rng;
  TrainConfig cfg;
  std::uint64_t train_steps = 0;
  int episodes_done = 0;
  // variance-bound bookkeeping, checked on every step taken
  std::uint64_t envelope_violations = 0;
  std::uint64_t action_set_mismatches = 0;

  TrainContext(std::vector<int> layer_sizes, const TrainConfig& config);
  void sync_target();
};

/// One training episode: epsilon-greedy stepping from the start pose, every
/// transition pushed, one mini-batch update per step once the buffer is warm.
/// episode is 1-based so the final episode of a run uses epsilon = 0.
EpisodeStats run_episode(const Environment& env, TrainContext& ctx, int episode);

struct Rollout {
  Trajectory pose;                 // mandrel frame, one sample per model step
  std::vector<JointState> joints;
};

/// Greedy (epsilon = 0) rollout of the trained agent from start to the end of
/// the mean trajectory. Throws OptimizationFailedError when a greedy step
/// collides or is unreachable.
Rollout rollout_greedy(const Environment& env, const QNetwork& net, bool translation_only_state);

}  // namespace csrl
