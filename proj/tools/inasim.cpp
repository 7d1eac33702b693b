#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "inasim/harness/experiment.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::string workload;
  long long mesh = -1;
  std::string pes;
  std::string modes;
  long long rounds_cap = -1;
  bool force_rounds = false;
  bool event_log = false;
  std::string seed;
  std::string out_dir;
};

ina::harness::ExperimentConfig build_config(const CliOverrides& cli) {
  ina::harness::ExperimentConfig cfg;
  if (!cli.config_path.empty()) cfg = ina::harness::load_config(cli.config_path);
  using ina::harness::apply_setting;
  if (!cli.workload.empty()) apply_setting(cfg, "workload", cli.workload);
  if (cli.mesh > 0) apply_setting(cfg, "mesh", std::to_string(cli.mesh));
  if (!cli.pes.empty()) apply_setting(cfg, "pes", cli.pes);
  if (!cli.modes.empty()) apply_setting(cfg, "mode", cli.modes);
  if (cli.rounds_cap > 0)
    apply_setting(cfg, "rounds_cap", std::to_string(cli.rounds_cap));
  if (cli.force_rounds) apply_setting(cfg, "force_rounds", "true");
  if (cli.event_log) apply_setting(cfg, "event_log", "true");
  if (!cli.seed.empty()) apply_setting(cfg, "seed", cli.seed);
  if (!cli.out_dir.empty()) apply_setting(cfg, "out", cli.out_dir);
  cfg.validate();
  return cfg;
}

int cmd_tables(const CliOverrides& cli) {
  auto cfg = build_config(cli);
  std::cout << ina::harness::emit_tables(cfg);
  return 0;
}

int cmd_run(const CliOverrides& cli) {
  auto cfg = build_config(cli);
  auto report = ina::harness::run_experiment(cfg);
  ina::harness::write_report_files(report, cfg.out_dir);
  std::cout << ina::harness::render_runs(report);
  for (const auto& rec : report.runs) {
    if (!rec.ok) {
      std::cerr << "run failed: " << rec.layer << " pes=" << rec.pes << " "
                << rec.mode << ": " << rec.error << "\n";
    }
  }
  return 0;
}

int cmd_compare(const CliOverrides& cli) {
  auto cfg = build_config(cli);
  auto report = ina::harness::run_experiment(cfg);
  ina::harness::write_report_files(report, cfg.out_dir);
  std::string baseline = "ws_plain";
  for (const auto& m : cfg.modes) {
    if (m == "os_gather") baseline = "os_gather";
  }
  auto summary = ina::harness::compare(report, baseline, "ws_ina");
  std::string text = ina::harness::render_compare(summary);
  ina::harness::write_text_atomic(
      (std::filesystem::path(cfg.out_dir) / "compare.csv").string(), text);
  std::cout << text;
  return 0;
}

int cmd_trace(const CliOverrides& cli) {
  auto cfg = build_config(cli);
  auto layers = ina::harness::load_workload(cfg.workload);
  std::string mode_str = cfg.modes.front();
  ina::harness::Mode mode = ina::harness::mode_from_name(mode_str);
  long long e = cfg.pe_list.front();
  for (const auto& layer : layers) {
    ina::MeshShape mesh{cfg.mesh.n, e};
    auto sched = ina::harness::make_schedule(layer, mode, mesh, cfg.q, cfg.mem,
                                             cfg.rounds_cap, cfg.seed);
    ina::noc::MeshConfig net_cfg = cfg.mesh;
    net_cfg.pes_per_router = e;
    auto events = ina::traffic::nominal_trace(sched, net_cfg);
    std::ostringstream text;
    ina::traffic::write_trace(
        text, {layer.name, cfg.mesh.n, e, mode_str, cfg.seed}, events);
    std::filesystem::path path =
        std::filesystem::path(cfg.out_dir) /
        (layer.name + "_" + mode_str + "_e" + std::to_string(e) + ".trace");
    ina::harness::write_text_atomic(path.string(), text.str());
    std::cout << path.string() << ": " << events.size() << " events, "
              << sched.rounds << " rounds\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mesh NoC simulator with in-network accumulation"};
  app.require_subcommand(1);
  app.fallthrough();

  CliOverrides cli;
  app.add_option("--config", cli.config_path, "experiment config file");
  app.add_option("--workload", cli.workload,
                 "bundled workload name or layer file path");
  app.add_option("--mesh", cli.mesh, "mesh side length N");
  app.add_option("--pes", cli.pes, "PEs per router list, e.g. 1,2,4,8");
  app.add_option("--mode", cli.modes,
                 "mode list: ws_ina, ws_plain, os_gather");
  app.add_option("--rounds-cap", cli.rounds_cap, "simulate at most K rounds");
  app.add_flag("--force-rounds", cli.force_rounds,
               "report rounds even when accumulation is not required");
  app.add_option("--seed", cli.seed, "payload seed");
  app.add_option("--out", cli.out_dir, "output directory");
  app.add_flag("--event-log", cli.event_log, "write per-run event logs");

  auto* tables = app.add_subcommand("tables", "analytic round tables");
  auto* run = app.add_subcommand("run", "simulate the configured sweep");
  auto* cmp = app.add_subcommand("compare", "run and report improvement ratios");
  auto* trace = app.add_subcommand("trace", "emit traces without simulating");

  CLI11_PARSE(app, argc, argv);
  try {
    if (tables->parsed()) return cmd_tables(cli);
    if (run->parsed()) return cmd_run(cli);
    if (cmp->parsed()) return cmd_compare(cli);
    if (trace->parsed()) return cmd_trace(cli);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 1;
}
