#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "inasim/harness/experiment.hpp"

using namespace ina;
using namespace ina::harness;

namespace {

void use_test_data() { setenv("INASIM_DATA", INASIM_TEST_DATA_DIR, 1); }

std::filesystem::path temp_file(const std::string& name,
                                const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << text;
  return path;
}

ExperimentConfig tiny_config() {
  use_test_data();
  ExperimentConfig cfg;
  cfg.workload = "alexnet";
  cfg.pe_list = {1, 4};
  cfg.rounds_cap = 2;
  cfg.out_dir = (std::filesystem::temp_directory_path() / "inasim_t").string();
  return cfg;
}

}  // namespace

TEST_CASE("config files: overrides, fractions, rejection") {
  auto path = temp_file("inasim_test.cfg",
                        "# comment\n"
                        "mesh = 16\n"
                        "pes = 2, 8\n"
                        "rounds_cap = 7\n"
                        "seed = 42\n"
                        "energy.link = 5/2\n"
                        "energy.ina_add = 1.5\n"
                        "force_rounds = true\n"
                        "workload = vgg16\n");
  auto cfg = load_config(path.string());
  CHECK(cfg.mesh.n == 16);
  CHECK(cfg.pe_list == std::vector<long long>{2, 8});
  CHECK(cfg.rounds_cap == 7);
  CHECK(cfg.seed == 42);
  CHECK(cfg.coeffs.link_traversal == power::Ratio{5, 2});
  CHECK(cfg.coeffs.ina_add == power::Ratio{3, 2});
  CHECK(cfg.force_rounds);
  CHECK(cfg.workload == "vgg16");
  cfg.validate();

  ExperimentConfig fresh;
  CHECK_THROWS_AS(apply_setting(fresh, "no_such_key", "1"), ConfigError);
  CHECK_THROWS_AS(apply_setting(fresh, "force_rounds", "maybe"), ConfigError);
  auto bad = temp_file("inasim_bad.cfg", "mesh 8\n");
  CHECK_THROWS_AS(load_config(bad.string()), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/inasim.cfg"), ConfigError);

  ExperimentConfig invalid;
  invalid.rounds_cap = 0;
  CHECK_THROWS_AS(invalid.validate(), ConfigError);
  invalid = ExperimentConfig{};
  invalid.modes.clear();
  CHECK_THROWS_AS(invalid.validate(), ConfigError);
}

TEST_CASE("mode names round-trip") {
  for (Mode mode : {Mode::WsIna, Mode::WsPlain, Mode::OsGather}) {
    CHECK(mode_from_name(mode_name(mode)) == mode);
  }
  CHECK_THROWS_AS(mode_from_name("ws"), ConfigError);
}

TEST_CASE("workload resolution") {
  use_test_data();
  CHECK_FALSE(load_workload("alexnet").empty());
  CHECK(load_workload("vgg16").size() == 13);
  CHECK_THROWS_AS(load_workload("no_such_net"), ConfigError);
  auto path = temp_file("inasim_one.layers", "only 3 4 5 6\n");
  auto layers = load_workload(path.string());
  REQUIRE(layers.size() == 1);
  CHECK(layers[0].name == "only");
}

TEST_CASE("every mode reproduces the convolution oracle word for word") {
  // capacity 5 at 160 bits: the 10-element filters split into two parts
  LayerShape layer{"v", 1, 10, 4, 2};
  RunOptions opts;
  opts.verify = true;
  for (Mode mode : {Mode::WsIna, Mode::WsPlain, Mode::OsGather}) {
    auto sched =
        make_schedule(layer, mode, {4, 1}, Precision{}, PeMemory{160},
                      std::nullopt, 3);
    auto result = run_schedule(sched, opts);
    CHECK(result.mismatched_words == 0);
    CHECK(result.verified_words == layer.filters * layer.output * layer.output);
    CHECK(result.stats.packets_injected == result.stats.packets_delivered);
  }
}

TEST_CASE("event logs are deterministic and show in-network accumulation") {
  LayerShape layer{"v", 1, 10, 4, 2};
  auto sched = make_schedule(layer, Mode::WsIna, {4, 1}, Precision{},
                             PeMemory{160}, std::nullopt, 3);
  std::ostringstream log_a, log_b;
  RunOptions opts;
  opts.event_log = &log_a;
  auto a = run_schedule(sched, opts);
  opts.event_log = &log_b;
  auto b = run_schedule(sched, opts);
  CHECK(log_a.str() == log_b.str());
  CHECK(log_a.str().find("INA_ACC") != std::string::npos);
  CHECK(a.stats == b.stats);
  CHECK(a.cycles == b.cycles);
}

TEST_CASE("round cap limits the simulation") {
  use_test_data();
  auto layer = load_workload("alexnet")[1];  // CONV2: 4374 full rounds
  auto sched = make_schedule(layer, Mode::WsIna, {8, 1}, Precision{},
                             PeMemory{}, 3, 1);
  auto result = run_schedule(sched, RunOptions{});
  CHECK(result.rounds == 3);
}

TEST_CASE("experiment sweep: cardinality, determinism, rendering") {
  auto cfg = tiny_config();
  auto report = run_experiment(cfg);
  // 5 layers x {1,4} PEs x {ws_plain, ws_ina}
  CHECK(report.runs.size() == 20);
  CHECK(report.ratios.size() == 10);
  for (const auto& rec : report.runs) {
    CHECK(rec.ok);
    CHECK(rec.error.empty());
    CHECK(rec.packets == rec.delivered);
    CHECK(rec.rounds <= cfg.rounds_cap);
    CHECK(rec.energy.total() > 0);
  }
  const RunRecord* conv2 = find_run(report, "CONV2", 1, "ws_ina");
  REQUIRE(conv2 != nullptr);
  CHECK(conv2->part_count == 2);
  CHECK(find_run(report, "CONV2", 1, "no_mode") == nullptr);

  auto again = run_experiment(cfg);
  CHECK(render_runs(report) == render_runs(again));
  CHECK(render_ratios(report) == render_ratios(again));
  CHECK(render_runs(report).find(
            "layer,pes,mode,parts,rounds,cycles,packets,delivered") !=
        std::string::npos);
  CHECK(render_ratios(report).find("latency_ratio") != std::string::npos);

  write_report_files(report, cfg.out_dir);
  CHECK(std::filesystem::exists(std::filesystem::path(cfg.out_dir) /
                                "runs.csv"));
  CHECK(std::filesystem::exists(std::filesystem::path(cfg.out_dir) /
                                "ratios.csv"));

  auto summary = compare(report, "ws_plain", "ws_ina");
  CHECK(summary.rows.size() == 10);
  CHECK(summary.mean_latency > 0);
  CHECK(summary.mean_energy > 0);
  CHECK(summary.mean_latency_by_e.size() == 2);
  CHECK(render_compare(summary).find("mean,all") != std::string::npos);
  CHECK_THROWS(compare(report, "os_gather", "ws_ina"));
}

TEST_CASE("single-part layers: accumulation mode changes nothing") {
  use_test_data();
  auto path = temp_file("inasim_p1.layers", "CONV1 11 3 64 55\n");
  ExperimentConfig cfg;
  cfg.workload = path.string();
  cfg.pe_list = {1, 2};
  cfg.rounds_cap = 2;
  auto report = run_experiment(cfg);
  REQUIRE(report.ratios.size() == 2);
  for (const auto& ratio : report.ratios) {
    CHECK(ratio.latency == 1);
    CHECK(ratio.energy == 1);
  }
}

TEST_CASE("analytic tables render through the experiment config") {
  auto cfg = tiny_config();
  auto text = emit_tables(cfg);
  CHECK(text.find("4374") != std::string::npos);
  CHECK(text.find("1094") != std::string::npos);
  CHECK(text.find("NA") != std::string::npos);
}

TEST_CASE("unmappable layers are reported per run, not fatal") {
  auto path = temp_file("inasim_huge.layers",
                        "HUGE 7 2048 8 4\nOK 5 64 192 27\n");
  ExperimentConfig cfg;
  cfg.workload = path.string();
  cfg.pe_list = {1};
  cfg.rounds_cap = 2;
  auto report = run_experiment(cfg);
  CHECK(report.runs.size() == 4);
  const RunRecord* huge = find_run(report, "HUGE", 1, "ws_ina");
  REQUIRE(huge != nullptr);
  CHECK_FALSE(huge->ok);
  CHECK_FALSE(huge->error.empty());
  const RunRecord* ok = find_run(report, "OK", 1, "ws_ina");
  REQUIRE(ok != nullptr);
  CHECK(ok->ok);
  // the broken layer produces no ratio, the good one does
  CHECK(report.ratios.size() == 1);
}
