#include "csrl/environment.hpp"

#include <cmath>
#include <stdexcept>

namespace csrl {

double reward_value(double delta_phi_deg, const Vec3& s, const Vec3& s_next,
                    const std::optional<Vec3>& prev, double mean_seg_len, double constant) {
  if (mean_seg_len < 1e-12) throw InvalidInputError("degenerate mean segment length");
  const double joint_term = delta_phi_deg / 7.0;
  const double displacement_term = (s_next - s).norm() / mean_seg_len;
  double angle_term = 0.0;
  if (prev) {
    const Vec3 u = s - *prev;
    const Vec3 v = s_next - s;
    if (u.norm() >= 1e-12 && v.norm() >= 1e-12)
      angle_term = std::atan2(u.cross(v).norm(), u.dot(v));
  }
  return -joint_term - displacement_term - angle_term + constant;
}

Vec3 nearest_mean_orientation(const MeanVarModel& model, const Vec3& position) {
  if (model.length() == 0) throw InvalidInputError("empty model");
  int best = 0;
  double best_d = (model.mean[0].t - position).squaredNorm();
  for (int j = 1; j < model.length(); ++j) {
    const double d = (model.mean[j].t - position).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return model.mean[best].r;
}

Environment::Environment(const MeanVarModel& model, const Grid& grid, const ArmModel& arm,
                         const Scene& scene, const Eigen::Isometry3d& mandrel_in_base,
                         EnvParams params)
    : model_(&model),
      grid_(&grid),
      arm_(&arm),
      scene_(&scene),
      mandrel_in_base_(mandrel_in_base),
      params_(params) {
  if (model.length() < 2) throw InvalidInputError("model too short for an episode");
  bool any_segment = false;
  for (int k = 0; k + 1 < model.length(); ++k)
    if ((model.mean[k + 1].t - model.mean[k].t).norm() >= 1e-12) any_segment = true;
  if (!any_segment) throw InvalidInputError("mean trajectory is a single point");
}

double Environment::mean_segment_length(int k) const {
  const auto seg_len = [&](int j) {
    return (model_->mean[j + 1].t - model_->mean[j].t).norm();
  };
  const double own = seg_len(k);
  if (own >= 1e-12) return own;
  ++degenerate_segment_uses_;
  const int last = model_->length() - 2;
  for (int off = 1; off <= last; ++off) {
    if (k - off >= 0 && seg_len(k - off) >= 1e-12) return seg_len(k - off);
    if (k + off <= last && seg_len(k + off) >= 1e-12) return seg_len(k + off);
  }
  throw InvalidInputError("no non-degenerate mean segment found");
}

bool Environment::in_envelope(const Vec3& position, int k) const {
  const Vec3 mean = model_->mean[k].t;
  const Vec3 sigma = model_->sigma[k].head<3>();
  return ((position - mean).cwiseAbs().array() <= sigma.array() + params_.envelope_tol).all();
}

EnvState Environment::reset() const {
  EnvState s;
  s.position = model_->mean[0].t;
  s.k = 0;
  const Pose6D start{model_->mean[0].t, model_->mean[0].r};
  s.joints = inverse_kinematics(*arm_, Pose6D::from_isometry(mandrel_in_base_ * start.to_isometry()),
                                arm_->home, params_.ik);
  return s;
}

ActionSet Environment::targets(const EnvState& s, std::mt19937_64* rng) const {
  if (params_.random_action_sampling) {
    if (!rng) throw InvalidInputError("random action sampling needs an rng");
    return action_targets_random(*model_, s.k, s.position, *rng);
  }
  return action_targets(*model_, s.k, s.position);
}

std::vector<std::uint8_t> Environment::valid_mask(const EnvState& s, const ActionSet& acts) const {
  std::vector<std::uint8_t> mask(acts.size());
  for (int a = 0; a < acts.size(); ++a)
    mask[a] = grid_->contains(acts[a]) && in_envelope(acts[a], s.k + 1) ? 1 : 0;
  return mask;
}

StepOutcome Environment::step(const EnvState& s, int action, const ActionSet& acts) const {
  if (action < 0 || action >= acts.size()) throw std::out_of_range("action id out of range");
  if (s.k >= horizon()) throw InvalidInputError("stepping a finished episode");

  const Vec3 target_pos = acts[action];
  const Pose6D target{target_pos, nearest_mean_orientation(*model_, target_pos)};
  const Pose6D target_in_base = Pose6D::from_isometry(mandrel_in_base_ * target.to_isometry());

  StepOutcome out;
  out.next = s;
  out.next.position = target_pos;
  out.next.k = s.k + 1;
  out.next.prev_position = s.position;

  bool ik_failed = false;
  JointState q_new = s.joints;
  try {
    q_new = inverse_kinematics(*arm_, target_in_base, s.joints, params_.ik);
  } catch (const UnreachablePoseError&) {
    ik_failed = true;
  }

  if (ik_failed || check_collision(*arm_, q_new, *scene_)) {
    out.next.joints = q_new;
    out.reward = params_.collision_penalty;
    out.collided = true;
    out.terminal = true;
    return out;
  }

  out.next.joints = q_new;
  out.reward = reward_value(joint_delta_deg(s.joints, q_new), s.position, target_pos,
                            s.prev_position, mean_segment_length(s.k), params_.reward_constant);
  out.terminal = out.next.k >= horizon();
  return out;
}

Eigen::VectorXd Environment::encode_state(const EnvState& s, bool translation_only) const {
  const Vec3 extent = grid_->extent();
  Eigen::VectorXd enc(translation_only ? 3 : 4);
  for (int i = 0; i < 3; ++i) enc[i] = (s.position[i] - grid_->origin[i]) / extent[i];
  if (!translation_only) enc[3] = static_cast<double>(s.k) / model_->length();
  return enc;
}

TrainContext::TrainContext(std::vector<int> layer_sizes, const TrainConfig& config)
    : net(std::move(layer_sizes)), buffer(config.capacity), rng(config.seed), cfg(config) {
  cfg.validate();
  net.init_random(rng);
  if (cfg.target_network) target = net;
}

void TrainContext::sync_target() {
  if (target) *target = net;
}

EpisodeStats run_episode(const Environment& env, TrainContext& ctx, int episode) {
  EpisodeStats stats;
  stats.episode = episode;
  stats.epsilon = epsilon_schedule(episode, ctx.cfg.num_episodes, ctx.cfg.epsilon0);

  EnvState state = env.reset();
  if (!env.in_envelope(state.position, state.k)) ++ctx.envelope_violations;
  double discount = 1.0;
  for (int w = 0; w < ctx.cfg.num_steps; ++w) {
    const ActionSet acts = env.targets(state, &ctx.rng);
    if (acts.size() != kActionCount) ++ctx.action_set_mismatches;
    const auto mask = env.valid_mask(state, acts);
    const Eigen::VectorXd enc = env.encode_state(state, ctx.cfg.translation_only_state);
    const Eigen::VectorXd q = ctx.net.forward(enc);
    const std::vector<double> q_vec(q.data(), q.data() + q.size());
    const int action = select_action(q_vec, mask, stats.epsilon, ctx.rng);

    const StepOutcome outcome = env.step(state, action, acts);
    ctx.buffer.push({enc, action,
                     env.encode_state(outcome.next, ctx.cfg.translation_only_state),
                     outcome.reward, outcome.terminal});

    if (ctx.buffer.size() >= static_cast<std::size_t>(ctx.cfg.batch)) {
      train_step(ctx.net, ctx.target ? &*ctx.target : nullptr, ctx.buffer, ctx.cfg, ctx.rng);
      ++ctx.train_steps;
      if (ctx.target && ctx.train_steps % ctx.cfg.target_sync_every == 0) ctx.sync_target();
    }

    stats.ret += discount * outcome.reward;
    discount *= ctx.cfg.gamma;
    ++stats.steps;
    if (outcome.collided) ++stats.collisions;
    if (!env.in_envelope(outcome.next.position, outcome.next.k)) ++ctx.envelope_violations;
    state = outcome.next;
    if (outcome.terminal) break;
  }
  ++ctx.episodes_done;
  return stats;
}

Rollout rollout_greedy(const Environment& env, const QNetwork& net, bool translation_only_state) {
  Rollout roll;
  roll.pose.frame = Frame::Mandrel;

  EnvState state = env.reset();
  roll.pose.samples.push_back(
      {0.0, {state.position, nearest_mean_orientation(env.model(), state.position)}});
  roll.joints.push_back(state.joints);

  while (state.k < env.horizon()) {
    const ActionSet acts = env.targets(state);
    const auto mask = env.valid_mask(state, acts);
    const Eigen::VectorXd q = net.forward(env.encode_state(state, translation_only_state));
    int best = -1;
    for (int a = 0; a < acts.size(); ++a) {
      if (!mask[a]) continue;
      if (best < 0 || q[a] > q[best]) best = a;
    }
    if (best < 0) throw OptimizationFailedError("no valid action during greedy rollout", state.k);

    const StepOutcome outcome = env.step(state, best, acts);
    if (outcome.collided)
      throw OptimizationFailedError("collision during greedy rollout", state.k);

    state = outcome.next;
    roll.pose.samples.push_back(
        {static_cast<double>(state.k),
         {state.position, nearest_mean_orientation(env.model(), state.position)}});
    roll.joints.push_back(state.joints);
  }
  return roll;
}

}  // namespace csrl
