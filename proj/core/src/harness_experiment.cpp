#include "inasim/harness/experiment.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "inasim/analytic.hpp"

namespace ina::harness {

namespace {

std::string fixed6(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << v;
  return out.str();
}

double mean_latency_of(const noc::SimStats& stats) {
  if (stats.latencies.empty()) return 0.0;
  long long sum = 0;
  for (const auto& rec : stats.latencies) sum += rec.latency();
  return static_cast<double>(sum) / static_cast<double>(stats.latencies.size());
}

}  // namespace

RunReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  RunReport report;
  report.config = cfg;
  std::vector<LayerShape> layers = load_workload(cfg.workload);

  for (const auto& layer : layers) {
    for (long long e : cfg.pe_list) {
      for (const auto& mode_str : cfg.modes) {
        RunRecord rec;
        rec.layer = layer.name;
        rec.pes = e;
        rec.mode = mode_str;
        try {
          Mode mode = mode_from_name(mode_str);
          MeshShape mesh{cfg.mesh.n, e};
          rec.part_count = analytic::pe_count(layer, cfg.q, cfg.mem);
          traffic::Schedule sched = make_schedule(
              layer, mode, mesh, cfg.q, cfg.mem, cfg.rounds_cap, cfg.seed);
          RunOptions opts;
          opts.base = cfg.mesh;
          std::ofstream log;
          if (cfg.event_log) {
            std::filesystem::create_directories(cfg.out_dir);
            log.open(std::filesystem::path(cfg.out_dir) /
                     (layer.name + "_e" + std::to_string(e) + "_" + mode_str +
                      ".events"));
            opts.event_log = &log;
          }
          RunResult result = run_schedule(sched, opts);
          rec.rounds = result.rounds;
          rec.cycles = result.cycles;
          rec.packets = result.stats.packets_injected;
          rec.delivered = result.stats.packets_delivered;
          rec.energy = power::tally(
              result.stats, cfg.coeffs,
              {layer.name, cfg.mesh.n, e, mode_str, cfg.seed});
          rec.ok = true;
        } catch (const std::exception& ex) {
          rec.error = ex.what();
        }
        report.runs.push_back(std::move(rec));
      }
    }
  }

  auto add_ratios = [&](const std::string& baseline,
                        const std::string& variant) {
    for (const auto& layer : layers) {
      for (long long e : cfg.pe_list) {
        const RunRecord* base = find_run(report, layer.name, e, baseline);
        const RunRecord* var = find_run(report, layer.name, e, variant);
        if (!base || !var || !base->ok || !var->ok) continue;
        RatioRecord ratio;
        ratio.layer = layer.name;
        ratio.pes = e;
        ratio.baseline = baseline;
        ratio.variant = variant;
        ratio.latency = power::improvement({base->cycles, 1}, {var->cycles, 1});
        ratio.energy = power::energy_improvement(base->energy, var->energy);
        report.ratios.push_back(std::move(ratio));
      }
    }
  };
  auto has_mode = [&](const std::string& m) {
    for (const auto& s : cfg.modes)
      if (s == m) return true;
    return false;
  };
  if (has_mode("ws_plain") && has_mode("ws_ina")) add_ratios("ws_plain", "ws_ina");
  if (has_mode("os_gather") && has_mode("ws_ina")) add_ratios("os_gather", "ws_ina");
  return report;
}

const RunRecord* find_run(const RunReport& report, const std::string& layer,
                          long long pes, const std::string& mode) {
  for (const auto& rec : report.runs) {
    if (rec.layer == layer && rec.pes == pes && rec.mode == mode) return &rec;
  }
  return nullptr;
}

std::string render_runs(const RunReport& report) {
  std::ostringstream out;
  out << "# workload=" << report.config.workload
      << " mesh=" << report.config.mesh.n
      << " rounds_cap=" << report.config.rounds_cap
      << " seed=" << report.config.seed << "\n";
  out << "layer,pes,mode,parts,rounds,cycles,packets,delivered,mean_latency,"
         "energy_total,energy_total_exact,error\n";
  for (const auto& rec : report.runs) {
    out << rec.layer << "," << rec.pes << "," << rec.mode << ","
        << rec.part_count << "," << rec.rounds << "," << rec.cycles << ","
        << rec.packets << "," << rec.delivered << ",";
    if (rec.ok) {
      out << fixed6(static_cast<double>(rec.cycles) /
                    std::max(1ll, rec.rounds))
          << "," << fixed6(power::to_double(rec.energy.total())) << ","
          << power::to_string(rec.energy.total()) << ",";
    } else {
      out << ",,,";
    }
    out << rec.error << "\n";
  }
  return out.str();
}

std::string render_ratios(const RunReport& report) {
  std::ostringstream out;
  out << "# workload=" << report.config.workload
      << " mesh=" << report.config.mesh.n
      << " rounds_cap=" << report.config.rounds_cap
      << " seed=" << report.config.seed << "\n";
  out << "layer,pes,baseline,variant,latency_ratio,latency_ratio_exact,"
         "energy_ratio,energy_ratio_exact\n";
  for (const auto& r : report.ratios) {
    out << r.layer << "," << r.pes << "," << r.baseline << "," << r.variant
        << "," << fixed6(power::to_double(r.latency)) << ","
        << power::to_string(r.latency) << ","
        << fixed6(power::to_double(r.energy)) << ","
        << power::to_string(r.energy) << "\n";
  }
  return out.str();
}

void write_text_atomic(const std::string& path, const std::string& text) {
  std::filesystem::path target(path);
  if (target.has_parent_path()) {
    std::filesystem::create_directories(target.parent_path());
  }
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << text;
  }
  std::filesystem::rename(tmp, target);
}

void write_report_files(const RunReport& report, const std::string& out_dir) {
  std::filesystem::path dir(out_dir);
  write_text_atomic((dir / "runs.csv").string(), render_runs(report));
  write_text_atomic((dir / "ratios.csv").string(), render_ratios(report));
}

std::string emit_tables(const ExperimentConfig& cfg) {
  std::vector<LayerShape> layers = load_workload(cfg.workload);
  std::vector<MeshShape> meshes;
  for (long long n : cfg.table_meshes) meshes.push_back({n, 1});
  auto report =
      analytic::table_report(layers, meshes, cfg.q, cfg.mem, cfg.force_rounds);
  std::ostringstream out;
  out << "# workload=" << cfg.workload << " q=" << cfg.q.bits
      << " m=" << cfg.mem.bits
      << (cfg.force_rounds ? " force_rounds=on" : "") << "\n";
  out << report.render(',');
  return out.str();
}

CompareSummary compare(const RunReport& report, const std::string& baseline,
                       const std::string& variant) {
  CompareSummary summary;
  summary.baseline = baseline;
  summary.variant = variant;
  std::map<long long, long long> count_by_e;
  for (const auto& r : report.ratios) {
    if (r.baseline != baseline || r.variant != variant) continue;
    summary.rows.push_back(r);
    summary.mean_latency_by_e[r.pes] += r.latency;
    summary.mean_energy_by_e[r.pes] += r.energy;
    count_by_e[r.pes] += 1;
  }
  if (summary.rows.empty()) {
    throw ConfigError("no completed run pairs for " + baseline + " vs " +
                      variant);
  }
  power::Ratio lat_sum{0}, en_sum{0};
  for (const auto& r : summary.rows) {
    lat_sum += r.latency;
    en_sum += r.energy;
    if (summary.best_energy.layer.empty() ||
        r.energy > summary.best_energy.energy) {
      summary.best_energy = r;
    }
    if (summary.best_latency.layer.empty() ||
        r.latency > summary.best_latency.latency) {
      summary.best_latency = r;
    }
  }
  long long total = static_cast<long long>(summary.rows.size());
  summary.mean_latency = lat_sum / total;
  summary.mean_energy = en_sum / total;
  for (auto& [e, sum] : summary.mean_latency_by_e) sum /= count_by_e[e];
  for (auto& [e, sum] : summary.mean_energy_by_e) sum /= count_by_e[e];
  return summary;
}

std::string render_compare(const CompareSummary& summary) {
  std::ostringstream out;
  out << "# baseline=" << summary.baseline << " variant=" << summary.variant
      << "\n";
  out << "layer,pes,latency_ratio,energy_ratio\n";
  for (const auto& r : summary.rows) {
    out << r.layer << "," << r.pes << ","
        << fixed6(power::to_double(r.latency)) << ","
        << fixed6(power::to_double(r.energy)) << "\n";
  }
  for (const auto& [e, lat] : summary.mean_latency_by_e) {
    out << "mean,"
        << e << "," << fixed6(power::to_double(lat)) << ","
        << fixed6(power::to_double(summary.mean_energy_by_e.at(e))) << "\n";
  }
  out << "mean,all," << fixed6(power::to_double(summary.mean_latency)) << ","
      << fixed6(power::to_double(summary.mean_energy)) << "\n";
  out << "# best energy: " << summary.best_energy.layer << " pes="
      << summary.best_energy.pes << " ("
      << fixed6(power::to_double(summary.best_energy.energy)) << "x)\n";
  out << "# best latency: " << summary.best_latency.layer << " pes="
      << summary.best_latency.pes << " ("
      << fixed6(power::to_double(summary.best_latency.latency)) << "x)\n";
  return out.str();
}

}  // namespace ina::harness
