#include "inasim/traffic/trace.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace ina::traffic {

namespace {

noc::PacketClass class_from_name(const std::string& name) {
  if (name == "unicast") return noc::PacketClass::Unicast;
  if (name == "stream") return noc::PacketClass::Stream;
  if (name == "ina_chain") return noc::PacketClass::InaChain;
  if (name == "gather") return noc::PacketClass::Gather;
  throw ConfigError("unknown packet class '" + name + "' in trace");
}

}  // namespace

void write_trace(std::ostream& out, const TraceMeta& meta,
                 const std::vector<TraceEvent>& events) {
  out << "# layer=" << meta.layer << " mesh=" << meta.n << " pes=" << meta.e
      << " mode=" << meta.mode << " seed=" << meta.seed << "\n";
  out << "# cycle, src_x, src_y, class, dst_x, dst_y, flits, chain_id\n";
  for (const auto& ev : events) {
    out << ev.cycle << ", " << ev.src.x << ", " << ev.src.y << ", "
        << noc::packet_class_name(ev.klass) << ", " << ev.dst.x << ", "
        << ev.dst.y << ", " << ev.flits << ", " << ev.chain_id << "\n";
  }
}

std::pair<TraceMeta, std::vector<TraceEvent>> read_trace(std::istream& in) {
  TraceMeta meta;
  std::vector<TraceEvent> events;
  std::string line;
  bool meta_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (meta_seen) continue;
      std::istringstream hdr(line.substr(1));
      std::string field;
      while (hdr >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        std::string key = field.substr(0, eq);
        std::string value = field.substr(eq + 1);
        if (key == "layer") meta.layer = value;
        else if (key == "mesh") meta.n = std::stoll(value);
        else if (key == "pes") meta.e = std::stoll(value);
        else if (key == "mode") meta.mode = value;
        else if (key == "seed") meta.seed = std::stoull(value);
        meta_seen = true;
      }
      continue;
    }
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream row(line);
    TraceEvent ev;
    std::string klass;
    if (!(row >> ev.cycle >> ev.src.x >> ev.src.y >> klass >> ev.dst.x >>
          ev.dst.y >> ev.flits >> ev.chain_id)) {
      throw ConfigError("malformed trace line: " + line);
    }
    ev.klass = class_from_name(klass);
    events.push_back(ev);
  }
  return {meta, events};
}

VolumeTotals::PerClass& VolumeTotals::of(noc::PacketClass klass) {
  switch (klass) {
    case noc::PacketClass::Unicast: return unicast;
    case noc::PacketClass::Stream: return stream;
    case noc::PacketClass::InaChain: return ina_chain;
    case noc::PacketClass::Gather: return gather;
  }
  return unicast;
}

long long VolumeTotals::total_flits() const {
  return unicast.flits + stream.flits + ina_chain.flits + gather.flits;
}

VolumeTotals trace_volume(const std::vector<TraceEvent>& events,
                          const noc::MeshConfig& config) {
  VolumeTotals totals;
  for (const auto& ev : events) {
    auto& slot = totals.of(ev.klass);
    slot.packets += 1;
    slot.flits += ev.flits;
    slot.payload_words += (ev.flits - 1) * config.words_per_flit();
  }
  return totals;
}

std::vector<TraceEvent> nominal_trace(const Schedule& schedule,
                                      const noc::MeshConfig& config) {
  std::vector<TraceEvent> events;
  long long n = schedule.mesh.n;
  // Bounds per round: chain transit over P-1 hops plus the eject/inject
  // detours the non-INA flow pays; gather transit across the row.
  long long chain_flits = config.packet_flits(schedule.mesh.e);
  long long gather_flits = config.packet_flits(n * schedule.mesh.e);
  long long per_node_detour = config.ni_eject_latency +
                              config.local_acc_latency +
                              config.ni_inject_latency +
                              2 * (chain_flits - 1);
  long long p = schedule.parts.part_count;
  long long chain_bound =
      config.ni_inject_latency + (p - 1) * (config.router_latency + 1) +
      config.router_latency + (chain_flits - 1) + config.ni_eject_latency +
      (schedule.ina_enabled ? 0 : p * per_node_detour);
  long long gather_bound = config.ni_inject_latency +
                           (n - 1) * (config.router_latency + 1) +
                           config.router_latency + (gather_flits - 1) +
                           config.ni_eject_latency;
  long long cycle = 0;
  for (long long t = 0; t < schedule.rounds; ++t) {
    RoundPlan plan = schedule.round_plan(t);
    for (const auto& op : plan.weight_streams) {
      events.push_back({cycle, {0, op.dst.y}, op.dst, noc::PacketClass::Stream,
                        config.packet_flits(op.words), -1});
    }
    for (const auto& op : plan.input_streams) {
      events.push_back({cycle, {0, op.dst.y}, op.dst, noc::PacketClass::Stream,
                        config.packet_flits(op.words), -1});
    }
    long long compute0 = schedule.parts.sizes[0];
    for (const auto& chain : plan.chains) {
      noc::NodeAddress src{static_cast<int>(chain.column),
                           static_cast<int>(schedule.part_row(chain.group, 0))};
      noc::NodeAddress dst{static_cast<int>(chain.column),
                           static_cast<int>(schedule.final_row(chain.group))};
      events.push_back({cycle + compute0, src, dst, noc::PacketClass::InaChain,
                        chain_flits, chain.chain_id});
    }
    long long gather_launch = cycle + compute0 + chain_bound;
    for (long long row : plan.gather_rows) {
      events.push_back({gather_launch, {0, static_cast<int>(row)},
                        {static_cast<int>(n - 1), static_cast<int>(row)},
                        noc::PacketClass::Gather, gather_flits, -1});
    }
    cycle = gather_launch + gather_bound + 1;
  }
  return events;
}

}  // namespace ina::traffic
