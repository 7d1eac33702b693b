#ifndef INASIM_HARNESS_EXPERIMENT_HPP
#define INASIM_HARNESS_EXPERIMENT_HPP

#include <map>

#include "inasim/harness/config.hpp"
#include "inasim/harness/runner.hpp"

namespace ina::harness {

struct RunRecord {
  std::string layer;
  long long pes = 1;
  std::string mode;
  bool ok = false;
  std::string error;
  long long part_count = 1;   // P# for the layer at this config
  long long rounds = 0;
  long long cycles = 0;
  long long packets = 0;
  long long delivered = 0;
  power::EnergyReport energy;
};

// baseline / variant ratios for one (layer, E); > 1 favors the variant.
struct RatioRecord {
  std::string layer;
  long long pes = 1;
  std::string baseline, variant;
  power::Ratio latency{0};
  power::Ratio energy{0};
};

struct RunReport {
  ExperimentConfig config;
  std::vector<RunRecord> runs;
  std::vector<RatioRecord> ratios;
};

// Full sweep: every (layer, E, mode); per-run failures are recorded, not
// fatal. Ratios cover ws_plain/ws_ina and os_gather/ws_ina when both sides
// completed.
RunReport run_experiment(const ExperimentConfig& cfg);

const RunRecord* find_run(const RunReport& report, const std::string& layer,
                          long long pes, const std::string& mode);

std::string render_runs(const RunReport& report);
std::string render_ratios(const RunReport& report);
// runs.csv and ratios.csv under out_dir, written atomically.
void write_report_files(const RunReport& report, const std::string& out_dir);

// Analytic round table for the configured workload at the configured meshes.
std::string emit_tables(const ExperimentConfig& cfg);

struct CompareSummary {
  std::string baseline, variant;
  std::vector<RatioRecord> rows;
  std::map<long long, power::Ratio> mean_latency_by_e, mean_energy_by_e;
  power::Ratio mean_latency{0}, mean_energy{0};
  RatioRecord best_energy, best_latency;
};

CompareSummary compare(const RunReport& report, const std::string& baseline,
                       const std::string& variant);
std::string render_compare(const CompareSummary& summary);

void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace ina::harness

#endif
