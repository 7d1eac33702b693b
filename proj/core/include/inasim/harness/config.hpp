#ifndef INASIM_HARNESS_CONFIG_HPP
#define INASIM_HARNESS_CONFIG_HPP

#include <string>
#include <vector>

#include "inasim/noc/config.hpp"
#include "inasim/power.hpp"

namespace ina::harness {

// Experiment settings: key = value file, '#' comments, CLI overrides on top.
struct ExperimentConfig {
  noc::MeshConfig mesh;            // pes_per_router is swept via pe_list
  Precision q;
  PeMemory mem;
  power::EnergyCoefficients coeffs;
  std::string workload = "alexnet";  // bundled name or a layer-file path
  std::vector<std::string> modes{"ws_plain", "ws_ina"};
  std::vector<long long> pe_list{1, 2, 4, 8};
  std::vector<long long> table_meshes{8, 16};
  long long rounds_cap = 64;
  bool force_rounds = false;
  uint64_t seed = 1;
  std::string out_dir = "out";
  bool event_log = false;

  void validate() const;
};

ExperimentConfig load_config(const std::string& path);
// One "key = value" assignment; unknown keys are rejected.
void apply_setting(ExperimentConfig& cfg, const std::string& key,
                   const std::string& value);

// Bundled workload lookup: "alexnet" / "vgg16" / "resnet50" resolve to the
// shipped data files ($INASIM_DATA overrides the compiled-in directory);
// anything containing a path separator or an existing file is used verbatim.
std::string resolve_workload(const std::string& name_or_path);
std::string data_dir();

std::vector<LayerShape> load_workload(const std::string& name_or_path);

}  // namespace ina::harness

#endif
