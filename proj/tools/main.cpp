// Command-line front end for the trajectory-optimization pipeline:
//   demogen -> ingest -> model -> train -> optimize -> evaluate / plot

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csrl/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

std::string timestamp_dir(const std::string& cmd) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", std::gmtime(&t));
  return std::string("runs/") + buf + "-" + cmd;
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON run configuration")
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out_dir, "output directory (default: runs/<timestamp>-<cmd>)");
  cmd->add_option("--seed", opts.seed, "override the demogen and training seeds")
      ->each([&opts](const std::string&) { opts.seed_given = true; });
}

csrl::RunConfig resolve_config(const CommonOpts& opts) {
  csrl::RunConfig cfg;
  if (!opts.config_path.empty()) cfg = csrl::load_run_config(opts.config_path);
  else cfg.demo = csrl::DemoGenConfig::defaults();
  if (opts.seed_given) cfg.apply_seed(opts.seed);
  return cfg;
}

fs::path resolve_out(const CommonOpts& opts, const std::string& cmd) {
  return opts.out_dir.empty() ? fs::path(timestamp_dir(cmd)) : fs::path(opts.out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learn an optimized manipulation trajectory from noisy demonstrations"};
  app.require_subcommand(1);

  CommonOpts ingest_opts, demogen_opts, model_opts, train_opts, optimize_opts, evaluate_opts,
      plot_opts;
  std::vector<std::string> ingest_files, model_files, evaluate_files, plot_files;
  std::string train_model, optimize_checkpoint, optimize_model;
  bool train_resume = false;
  int train_stop_after = 0;

  auto* c_ingest = app.add_subcommand("ingest", "parse and validate demonstration CSVs");
  c_ingest->add_option("files", ingest_files, "demonstration CSV files")->required();
  add_common(c_ingest, ingest_opts);

  auto* c_demogen = app.add_subcommand("demogen", "generate synthetic demonstrations");
  add_common(c_demogen, demogen_opts);

  auto* c_model = app.add_subcommand("model", "build the aligned mean/variance model");
  c_model->add_option("files", model_files, "demonstration CSV files")->required();
  add_common(c_model, model_opts);

  auto* c_train = app.add_subcommand("train", "train the deep Q-learning agent");
  c_train->add_option("--model", train_model, "model.json from the model step")
      ->required()
      ->check(CLI::ExistingFile);
  c_train->add_flag("--resume", train_resume, "continue from checkpoint.json in --out");
  c_train->add_option("--stop-after", train_stop_after,
                      "interrupt after this many episodes (0 = run to completion)");
  add_common(c_train, train_opts);

  auto* c_optimize = app.add_subcommand("optimize", "greedy rollout of a trained checkpoint");
  c_optimize->add_option("--checkpoint", optimize_checkpoint, "checkpoint.json")
      ->required()
      ->check(CLI::ExistingFile);
  c_optimize->add_option("--model", optimize_model, "model.json")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(c_optimize, optimize_opts);

  auto* c_evaluate = app.add_subcommand("evaluate", "metric reports, tables and plots");
  c_evaluate->add_option("files", evaluate_files, "demo CSVs and/or pose CSVs")->required();
  add_common(c_evaluate, evaluate_opts);

  auto* c_plot = app.add_subcommand("plot", "SVG plots only");
  c_plot->add_option("files", plot_files, "demo CSVs and/or pose CSVs")->required();
  add_common(c_plot, plot_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_ingest->parsed()) {
      std::vector<fs::path> files(ingest_files.begin(), ingest_files.end());
      const csrl::IngestResult result = csrl::cmd_ingest(files);
      std::cout << "demos: " << result.summaries.size() << '\n';
      for (const auto& s : result.summaries)
        std::cout << "  " << s.file << ": " << s.samples << " samples, " << s.duration_s
                  << " s, pose length " << s.pose_length_m << " m\n";
    } else if (c_demogen->parsed()) {
      const auto cfg = resolve_config(demogen_opts);
      const auto out = resolve_out(demogen_opts, "demogen");
      const auto files = csrl::cmd_demogen(cfg, out);
      std::cout << "wrote " << files.size() << " demonstrations to " << out.string() << '\n';
    } else if (c_model->parsed()) {
      const auto cfg = resolve_config(model_opts);
      const auto out = resolve_out(model_opts, "model");
      std::vector<fs::path> files(model_files.begin(), model_files.end());
      const auto ingest = csrl::cmd_ingest(files);
      const auto path = csrl::cmd_model(ingest.set, cfg, out);
      std::cout << "model written to " << path.string() << '\n';
    } else if (c_train->parsed()) {
      const auto cfg = resolve_config(train_opts);
      const auto out = resolve_out(train_opts, "train");
      const auto summary = csrl::cmd_train(train_model, cfg, out, train_resume, train_stop_after);
      std::cout << "episodes: " << summary.episodes_run
                << ", final epsilon: " << summary.final_epsilon
                << ", return slope over last 20: " << summary.return_slope_last20 << '\n'
                << "checkpoint: " << summary.checkpoint.string() << '\n';
    } else if (c_optimize->parsed()) {
      const auto cfg = resolve_config(optimize_opts);
      const auto out = resolve_out(optimize_opts, "optimize");
      const auto result = csrl::cmd_optimize(optimize_checkpoint, optimize_model, cfg, out);
      std::cout << "optimized trajectory: " << result.pose_csv.string() << " ("
                << result.rollout.pose.size() << " samples)\n"
                << "joint trajectory: " << result.joints_csv.string() << '\n';
    } else if (c_evaluate->parsed() || c_plot->parsed()) {
      const bool plots_only = c_plot->parsed();
      const auto& opts = plots_only ? plot_opts : evaluate_opts;
      const auto& names = plots_only ? plot_files : evaluate_files;
      const auto cfg = resolve_config(opts);
      const auto out = resolve_out(opts, plots_only ? "plot" : "evaluate");
      std::vector<fs::path> files(names.begin(), names.end());
      const auto reports = csrl::cmd_evaluate(files, cfg, out, plots_only);
      if (!plots_only) {
        std::cout << "label,pose_length_m,joint_length_deg,smoothness_deg\n";
        for (const auto& r : reports)
          std::cout << r.label << ',' << r.pose_length_m << ',' << r.joint_length_deg << ','
                    << r.smoothness_deg << '\n';
      }
      std::cout << "plots written to " << out.string() << '\n';
    }
  } catch (const csrl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
