#include "csrl/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "csrl/svg_plot.hpp"

namespace csrl {

using nlohmann::json;

namespace {

void override_double(const json& j, const char* key, double& v) {
  if (j.contains(key)) v = j.at(key).get<double>();
}
void override_int(const json& j, const char* key, int& v) {
  if (j.contains(key)) v = j.at(key).get<int>();
}
void override_bool(const json& j, const char* key, bool& v) {
  if (j.contains(key)) v = j.at(key).get<bool>();
}
void override_u64(const json& j, const char* key, std::uint64_t& v) {
  if (j.contains(key)) v = j.at(key).get<std::uint64_t>();
}

json run_config_to_json(const RunConfig& cfg) {
  json j;
  j["smoothing_window"] = cfg.smoothing_window;
  j["delta"] = cfg.delta;
  j["hidden"] = cfg.hidden;
  j["arm_scene_path"] = cfg.arm_scene_path;
  j["checkpoint_every"] = cfg.checkpoint_every;
  j["train"] = {{"alpha", cfg.train.alpha},
                {"gamma", cfg.train.gamma},
                {"num_episodes", cfg.train.num_episodes},
                {"num_steps", cfg.train.num_steps},
                {"batch", cfg.train.batch},
                {"epsilon0", cfg.train.epsilon0},
                {"capacity", cfg.train.capacity},
                {"seed", cfg.train.seed},
                {"target_network", cfg.train.target_network},
                {"target_sync_every", cfg.train.target_sync_every},
                {"translation_only_state", cfg.train.translation_only_state}};
  j["env"] = {{"collision_penalty", cfg.env.collision_penalty},
              {"reward_constant", cfg.env.reward_constant},
              {"random_action_sampling", cfg.env.random_action_sampling}};
  json prim = json::array();
  for (const auto& p : cfg.demo.primitives) {
    json wps = json::array();
    for (const auto& wp : p) {
      const Vec6 v = wp.to_vec6();
      wps.push_back({v[0], v[1], v[2], v[3], v[4], v[5]});
    }
    prim.push_back(wps);
  }
  j["demogen"] = {{"n_demos", cfg.demo.n_demos},
                  {"base_samples", cfg.demo.base_samples},
                  {"dt", cfg.demo.dt},
                  {"primitives", prim},
                  {"noise_sigma_t",
                   {cfg.demo.noise_sigma_t.x(), cfg.demo.noise_sigma_t.y(),
                    cfg.demo.noise_sigma_t.z()}},
                  {"noise_sigma_r", cfg.demo.noise_sigma_r},
                  {"time_warp", cfg.demo.time_warp},
                  {"burst_prob", cfg.demo.burst_prob},
                  {"burst_amplitude", cfg.demo.burst_amplitude},
                  {"mandrel_drift", cfg.demo.mandrel_drift},
                  {"seed", cfg.demo.seed}};
  return j;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }

  RunConfig cfg;
  cfg.demo = DemoGenConfig::defaults();
  override_int(j, "smoothing_window", cfg.smoothing_window);
  override_double(j, "delta", cfg.delta);
  if (j.contains("hidden")) cfg.hidden = j.at("hidden").get<std::vector<int>>();
  if (j.contains("arm_scene_path")) cfg.arm_scene_path = j.at("arm_scene_path").get<std::string>();
  override_int(j, "checkpoint_every", cfg.checkpoint_every);
  if (j.contains("train")) {
    const auto& t = j.at("train");
    override_double(t, "alpha", cfg.train.alpha);
    override_double(t, "gamma", cfg.train.gamma);
    override_int(t, "num_episodes", cfg.train.num_episodes);
    override_int(t, "num_steps", cfg.train.num_steps);
    override_int(t, "batch", cfg.train.batch);
    override_double(t, "epsilon0", cfg.train.epsilon0);
    if (t.contains("capacity")) cfg.train.capacity = t.at("capacity").get<std::size_t>();
    override_u64(t, "seed", cfg.train.seed);
    override_bool(t, "target_network", cfg.train.target_network);
    override_int(t, "target_sync_every", cfg.train.target_sync_every);
    override_bool(t, "translation_only_state", cfg.train.translation_only_state);
  }
  if (j.contains("env")) {
    const auto& e = j.at("env");
    override_double(e, "collision_penalty", cfg.env.collision_penalty);
    override_double(e, "reward_constant", cfg.env.reward_constant);
    override_bool(e, "random_action_sampling", cfg.env.random_action_sampling);
  }
  if (j.contains("demogen")) {
    const auto& d = j.at("demogen");
    override_int(d, "n_demos", cfg.demo.n_demos);
    override_int(d, "base_samples", cfg.demo.base_samples);
    override_double(d, "dt", cfg.demo.dt);
    if (d.contains("primitives")) {
      const auto& prim = d.at("primitives");
      if (prim.size() != 3) throw ConfigError("demogen.primitives must list 3 primitives");
      for (int p = 0; p < 3; ++p) {
        cfg.demo.primitives[p].clear();
        for (const auto& wp : prim[p]) {
          Vec6 v;
          for (int c = 0; c < 6; ++c) v[c] = wp[c].get<double>();
          cfg.demo.primitives[p].push_back(Pose6D::from_vec6(v));
        }
      }
    }
    if (d.contains("noise_sigma_t"))
      for (int c = 0; c < 3; ++c) cfg.demo.noise_sigma_t[c] = d.at("noise_sigma_t")[c].get<double>();
    override_double(d, "noise_sigma_r", cfg.demo.noise_sigma_r);
    override_double(d, "time_warp", cfg.demo.time_warp);
    override_double(d, "burst_prob", cfg.demo.burst_prob);
    override_double(d, "burst_amplitude", cfg.demo.burst_amplitude);
    override_double(d, "mandrel_drift", cfg.demo.mandrel_drift);
    override_u64(d, "seed", cfg.demo.seed);
  }
  cfg.train.validate();
  if (cfg.delta <= 0.0) throw ConfigError("delta must be positive");
  if (!cfg.arm_scene_path.empty() && !std::filesystem::exists(cfg.arm_scene_path))
    throw ConfigError("arm_scene_path does not exist: " + cfg.arm_scene_path);
  return cfg;
}

void write_run_config(const std::filesystem::path& path, const RunConfig& cfg) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << run_config_to_json(cfg).dump(2) << '\n';
}

ArmSceneConfig resolve_arm_scene(const RunConfig& cfg) {
  if (cfg.arm_scene_path.empty()) return default_arm_scene();
  return read_arm_scene_json(cfg.arm_scene_path);
}

std::vector<int> network_layers(const RunConfig& cfg) {
  std::vector<int> layers;
  layers.push_back(cfg.train.translation_only_state ? 3 : 4);
  for (int h : cfg.hidden) layers.push_back(h);
  layers.push_back(kActionCount);
  return layers;
}

IngestResult cmd_ingest(std::vector<std::filesystem::path> files) {
  if (files.empty()) throw InvalidInputError("ingest needs at least one CSV file");
  std::sort(files.begin(), files.end());
  IngestResult result;
  for (const auto& f : files) {
    Demo demo = read_demo_csv(f);
    DemoSummary s;
    s.file = f.filename().string();
    s.samples = demo.device.size();
    s.duration_s = demo.device.samples.back().t - demo.device.samples.front().t;
    s.pose_length_m = 0.0;
    for (std::size_t i = 1; i < demo.device.size(); ++i)
      s.pose_length_m += (demo.device[i].pose.t - demo.device[i - 1].pose.t).norm();
    result.summaries.push_back(std::move(s));
    result.set.demos.push_back(std::move(demo));
  }
  return result;
}

std::vector<std::filesystem::path> cmd_demogen(const RunConfig& cfg,
                                               const std::filesystem::path& out_dir) {
  const DemoSet set = generate(cfg.demo);
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> files;
  for (std::size_t i = 0; i < set.demos.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "demo_%02zu.csv", i);
    const auto path = out_dir / name;
    write_demo_csv(path, set.demos[i]);
    files.push_back(path);
  }
  json manifest;
  manifest["seed"] = cfg.demo.seed;
  manifest["n_demos"] = cfg.demo.n_demos;
  json list = json::array();
  for (const auto& f : files) list.push_back(f.filename().string());
  manifest["files"] = list;
  std::ofstream out(out_dir / "demogen_manifest.json", std::ios::binary);
  out << manifest.dump(2) << '\n';
  return files;
}

std::filesystem::path cmd_model(const DemoSet& set, const RunConfig& cfg,
                                const std::filesystem::path& out_dir) {
  if (set.demos.empty()) throw InvalidInputError("empty demo set");
  std::vector<Trajectory> relative;
  for (const auto& demo : set.demos) {
    const Trajectory smoothed_device = smooth_moving_average(
        demo.device, std::min<int>(cfg.smoothing_window, static_cast<int>(demo.device.size())));
    const Trajectory smoothed_mandrel = smooth_moving_average(
        demo.mandrel, std::min<int>(cfg.smoothing_window, static_cast<int>(demo.mandrel.size())));
    relative.push_back(to_mandrel_frame(smoothed_device, smoothed_mandrel));
  }
  const std::vector<Trajectory> aligned = align_set(relative);
  const MeanVarModel model = build_model(aligned);
  const auto path = out_dir / "model.json";
  write_model_json(path, model);
  return path;
}

std::unique_ptr<EnvBundle> make_env(MeanVarModel model, const RunConfig& cfg) {
  auto bundle = std::make_unique<EnvBundle>();
  bundle->model = std::move(model);
  bundle->grid = build_grid(bundle->model, cfg.delta);
  bundle->arm_scene = resolve_arm_scene(cfg);
  EnvParams params = cfg.env;
  bundle->env = std::make_unique<Environment>(bundle->model, bundle->grid, bundle->arm_scene.arm,
                                              bundle->arm_scene.scene,
                                              bundle->arm_scene.mandrel_in_base, params);
  return bundle;
}

namespace {

double slope_of_tail(const std::vector<EpisodeStats>& stats, std::size_t window) {
  if (stats.size() < 2) return 0.0;
  const std::size_t n = std::min(window, stats.size());
  const std::size_t start = stats.size() - n;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i);
    const double y = stats[start + i].ret;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  return denom > 0 ? (n * sxy - sx * sy) / denom : 0.0;
}

void write_train_manifest(const std::filesystem::path& out_dir, const RunConfig& cfg,
                          const std::filesystem::path& model_path, const TrainSummary& summary) {
  json manifest;
  manifest["config"] = run_config_to_json(cfg);
  manifest["model_file"] = model_path.filename().string();
  manifest["model_hash"] = file_hash(model_path);
  manifest["episodes_run"] = summary.episodes_run;
  manifest["final_epsilon"] = summary.final_epsilon;
  manifest["return_slope_last20"] = summary.return_slope_last20;
  manifest["envelope_violations"] = summary.envelope_violations;
  manifest["action_set_mismatches"] = summary.action_set_mismatches;
  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << '\n';
}

}  // namespace

TrainSummary cmd_train(const std::filesystem::path& model_path, const RunConfig& cfg,
                       const std::filesystem::path& out_dir, bool resume, int stop_after) {
  std::filesystem::create_directories(out_dir);
  auto bundle = make_env(read_model_json(model_path), cfg);

  TrainContext ctx(network_layers(cfg), cfg.train);
  const auto checkpoint_path = out_dir / "checkpoint.json";
  const auto buffer_path = out_dir / "buffer.json";
  const auto log_path = out_dir / "episodes.csv";

  if (resume) {
    const Checkpoint cp = read_checkpoint_json(checkpoint_path);
    restore(cp, ctx);
    read_buffer_json(buffer_path, ctx.buffer);
  } else {
    std::filesystem::remove(log_path);
  }

  TrainSummary summary;
  int run_in_this_call = 0;
  for (int episode = ctx.episodes_done + 1; episode <= cfg.train.num_episodes; ++episode) {
    if (stop_after > 0 && run_in_this_call >= stop_after) break;
    const EpisodeStats stats = run_episode(*bundle->env, ctx, episode);
    ++run_in_this_call;
    append_episode_log(log_path, stats);
    summary.stats.push_back(stats);
    if (cfg.checkpoint_every > 0 && episode % cfg.checkpoint_every == 0) {
      write_checkpoint_json(checkpoint_path, snapshot(ctx));
      write_buffer_json(buffer_path, ctx.buffer);
    }
  }

  ensure_episode_log(log_path);
  summary.envelope_violations = ctx.envelope_violations;
  summary.action_set_mismatches = ctx.action_set_mismatches;
  summary.episodes_run = ctx.episodes_done;
  summary.final_epsilon =
      epsilon_schedule(cfg.train.num_episodes, cfg.train.num_episodes, cfg.train.epsilon0);
  summary.return_slope_last20 = slope_of_tail(summary.stats, 20);
  summary.checkpoint = checkpoint_path;
  summary.episode_log = log_path;
  write_checkpoint_json(checkpoint_path, snapshot(ctx));
  write_buffer_json(buffer_path, ctx.buffer);
  write_train_manifest(out_dir, cfg, model_path, summary);
  return summary;
}

OptimizeResult cmd_optimize(const std::filesystem::path& checkpoint_path,
                            const std::filesystem::path& model_path, const RunConfig& cfg,
                            const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto bundle = make_env(read_model_json(model_path), cfg);
  const Checkpoint cp = read_checkpoint_json(checkpoint_path);

  QNetwork net(cp.layer_sizes);
  net.weights() = cp.weights;
  net.biases() = cp.biases;

  OptimizeResult result;
  result.rollout = rollout_greedy(*bundle->env, net, cp.cfg.translation_only_state);
  result.pose_csv = out_dir / "optimized_pose.csv";
  result.joints_csv = out_dir / "optimized_joints.csv";
  write_pose_csv(result.pose_csv, result.rollout.pose);
  write_joints_csv(result.joints_csv, result.rollout.joints);
  return result;
}

namespace {

bool is_demo_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  return header.rfind("t,dx", 0) == 0;
}

std::vector<JointState> joints_along(const Trajectory& traj, const ArmSceneConfig& as,
                                     const IkParams& ik) {
  std::vector<JointState> joints;
  JointState seed = as.arm.home;
  for (const auto& s : traj.samples) {
    const Pose6D in_base =
        Pose6D::from_isometry(as.mandrel_in_base * s.pose.to_isometry());
    seed = inverse_kinematics(as.arm, in_base, seed, ik);
    joints.push_back(seed);
  }
  return joints;
}

}  // namespace

std::vector<TrajectoryReport> cmd_evaluate(const std::vector<std::filesystem::path>& files,
                                           const RunConfig& cfg,
                                           const std::filesystem::path& out_dir,
                                           bool plots_only) {
  if (files.empty()) throw InvalidInputError("evaluate needs at least one trajectory file");
  const ArmSceneConfig as = resolve_arm_scene(cfg);

  // demonstrations first, optimized/pose trajectories last
  std::vector<std::filesystem::path> ordered = files;
  std::stable_partition(ordered.begin(), ordered.end(),
                        [](const auto& f) { return is_demo_csv(f); });

  std::vector<TrajectoryReport> reports;
  std::vector<std::string> labels;
  std::vector<Trajectory> trajectories;
  for (const auto& f : ordered) {
    Trajectory traj;
    if (is_demo_csv(f)) {
      const Demo demo = read_demo_csv(f);
      traj = to_mandrel_frame(demo.device, demo.mandrel);
    } else {
      traj = read_pose_csv(f, Frame::Mandrel);
    }
    TrajectoryReport report;
    report.label = f.stem().string();
    report.pose_length_m = pose_length(traj);
    report.smoothness_deg = smoothness_deg(traj);
    report.joint_length_deg = joint_length_deg(joints_along(traj, as, cfg.env.ik));
    reports.push_back(report);
    labels.push_back(report.label);
    trajectories.push_back(std::move(traj));
  }

  std::filesystem::create_directories(out_dir);
  if (!plots_only) {
    write_reports_csv(out_dir / "evaluation.csv", reports);
    write_reports_json(out_dir / "evaluation.json", reports);
  }
  write_metric_bars_svg(out_dir / "metric_bars.svg", reports);
  write_dof_traces_svg(out_dir / "dof_traces.svg", labels, trajectories);
  return reports;
}

}  // namespace csrl
