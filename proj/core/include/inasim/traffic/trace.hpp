#ifndef INASIM_TRAFFIC_TRACE_HPP
#define INASIM_TRAFFIC_TRACE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "inasim/noc/config.hpp"
#include "inasim/traffic/schedule.hpp"

namespace ina::traffic {

// One injection: `cycle, src_x, src_y, class, dst_x, dst_y, flits, chain_id`.
struct TraceEvent {
  long long cycle = 0;
  noc::NodeAddress src, dst;
  noc::PacketClass klass = noc::PacketClass::Unicast;
  long long flits = 1;
  long long chain_id = -1;

  bool operator==(const TraceEvent&) const = default;
};

struct TraceMeta {
  std::string layer;
  long long n = 8;
  long long e = 1;
  std::string mode;
  uint64_t seed = 1;

  bool operator==(const TraceMeta&) const = default;
};

void write_trace(std::ostream& out, const TraceMeta& meta,
                 const std::vector<TraceEvent>& events);
// Inverse of write_trace: the same meta and event list come back.
std::pair<TraceMeta, std::vector<TraceEvent>> read_trace(std::istream& in);

// Totals per packet class. payload_words counts reserved payload capacity
// ((flits - 1) words-per-flit).
struct VolumeTotals {
  struct PerClass {
    long long packets = 0;
    long long flits = 0;
    long long payload_words = 0;
    bool operator==(const PerClass&) const = default;
  };
  PerClass unicast, stream, ina_chain, gather;

  PerClass& of(noc::PacketClass klass);
  long long total_flits() const;
  bool operator==(const VolumeTotals&) const = default;
};

VolumeTotals trace_volume(const std::vector<TraceEvent>& events,
                          const noc::MeshConfig& config);

// Zero-contention injection plan for a schedule: stamps are nominal (streams
// at round start, chains after part-0 compute, gathers after a closed-form
// chain-latency bound) — no simulation involved.
std::vector<TraceEvent> nominal_trace(const Schedule& schedule,
                                      const noc::MeshConfig& config);

}  // namespace ina::traffic

#endif
