#include "inasim/harness/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef INASIM_SOURCE_DATA_DIR
#define INASIM_SOURCE_DATA_DIR ""
#endif

namespace ina::harness {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

power::Ratio parse_ratio(const std::string& value) {
  // "3/2" or a plain decimal like "1.5" (at most 6 fraction digits).
  auto slash = value.find('/');
  if (slash != std::string::npos) {
    return {std::stoll(value.substr(0, slash)),
            std::stoll(value.substr(slash + 1))};
  }
  auto dot = value.find('.');
  if (dot == std::string::npos) return {std::stoll(value), 1};
  std::string frac = value.substr(dot + 1);
  if (frac.size() > 6) frac = frac.substr(0, 6);
  long long den = 1;
  for (size_t i = 0; i < frac.size(); ++i) den *= 10;
  long long whole = std::stoll(value.substr(0, dot));
  long long num = whole * den + (whole < 0 ? -1 : 1) * std::stoll("0" + frac);
  return {num, den};
}

bool parse_bool(const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError("expected a boolean, got '" + value + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  mesh.validate();
  q.validate();
  mem.validate(q);
  if (modes.empty()) throw ConfigError("mode list must not be empty");
  if (pe_list.empty()) throw ConfigError("pes list must not be empty");
  if (rounds_cap < 1) throw ConfigError("rounds_cap must be >= 1");
  bool ina = false;
  for (const auto& m : modes) ina = ina || m == "ws_ina";
  coeffs.validate(ina);
}

void apply_setting(ExperimentConfig& cfg, const std::string& key,
                   const std::string& value) {
  if (key == "mesh" || key == "n") cfg.mesh.n = std::stoll(value);
  else if (key == "buffer_depth") cfg.mesh.buffer_depth = std::stoi(value);
  else if (key == "vcs") cfg.mesh.vcs = std::stoi(value);
  else if (key == "flit_width_bits") cfg.mesh.flit_width_bits = std::stoi(value);
  else if (key == "router_latency") cfg.mesh.router_latency = std::stoi(value);
  else if (key == "link_latency") cfg.mesh.link_latency = std::stoi(value);
  else if (key == "ni_inject_latency") cfg.mesh.ni_inject_latency = std::stoi(value);
  else if (key == "ni_eject_latency") cfg.mesh.ni_eject_latency = std::stoi(value);
  else if (key == "local_acc_latency") cfg.mesh.local_acc_latency = std::stoi(value);
  else if (key == "ni_queue_packets") cfg.mesh.ni_queue_packets = std::stoi(value);
  else if (key == "livelock_bound") cfg.mesh.livelock_bound = std::stoll(value);
  else if (key == "precision_bits" || key == "q") cfg.q.bits = std::stoll(value);
  else if (key == "memory_bits" || key == "m") cfg.mem.bits = std::stoll(value);
  else if (key == "workload") cfg.workload = value;
  else if (key == "modes" || key == "mode") cfg.modes = split_list(value);
  else if (key == "pes") {
    cfg.pe_list.clear();
    for (const auto& item : split_list(value))
      cfg.pe_list.push_back(std::stoll(item));
  } else if (key == "table_meshes") {
    cfg.table_meshes.clear();
    for (const auto& item : split_list(value))
      cfg.table_meshes.push_back(std::stoll(item));
  }
  else if (key == "rounds_cap") cfg.rounds_cap = std::stoll(value);
  else if (key == "force_rounds") cfg.force_rounds = parse_bool(value);
  else if (key == "seed") cfg.seed = std::stoull(value);
  else if (key == "out") cfg.out_dir = value;
  else if (key == "event_log") cfg.event_log = parse_bool(value);
  else if (key == "energy.buffer_write") cfg.coeffs.buffer_write = parse_ratio(value);
  else if (key == "energy.buffer_read") cfg.coeffs.buffer_read = parse_ratio(value);
  else if (key == "energy.crossbar") cfg.coeffs.crossbar_traversal = parse_ratio(value);
  else if (key == "energy.arbitration") cfg.coeffs.arbitration = parse_ratio(value);
  else if (key == "energy.link") cfg.coeffs.link_traversal = parse_ratio(value);
  else if (key == "energy.ni_inject") cfg.coeffs.ni_inject = parse_ratio(value);
  else if (key == "energy.ni_eject") cfg.coeffs.ni_eject = parse_ratio(value);
  else if (key == "energy.ina_add") cfg.coeffs.ina_add = parse_ratio(value);
  else if (key == "energy.operand_latch") cfg.coeffs.operand_latch = parse_ratio(value);
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

std::string data_dir() {
  if (const char* env = std::getenv("INASIM_DATA")) return env;
  return INASIM_SOURCE_DATA_DIR;
}

std::string resolve_workload(const std::string& name_or_path) {
  if (std::filesystem::exists(name_or_path)) return name_or_path;
  if (name_or_path.find('/') == std::string::npos) {
    std::filesystem::path candidate =
        std::filesystem::path(data_dir()) / (name_or_path + ".layers");
    if (std::filesystem::exists(candidate)) return candidate.string();
  }
  throw ConfigError("workload not found: " + name_or_path);
}

std::vector<LayerShape> load_workload(const std::string& name_or_path) {
  return load_layer_file(resolve_workload(name_or_path));
}

}  // namespace ina::harness
