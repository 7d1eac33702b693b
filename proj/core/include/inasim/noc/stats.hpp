#ifndef INASIM_NOC_STATS_HPP
#define INASIM_NOC_STATS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "inasim/noc/packet.hpp"

namespace ina::noc {

struct EventCounters {
  long long buffer_write = 0;
  long long buffer_read = 0;
  long long crossbar_traversal = 0;
  long long arbitration = 0;
  long long link_traversal = 0;
  long long ni_inject = 0;
  long long ni_eject = 0;
  long long ina_add = 0;
  long long operand_latch = 0;

  bool operator==(const EventCounters&) const = default;
  EventCounters& operator+=(const EventCounters& o);
};

struct LatencyRecord {
  long long packet_id = -1;
  PacketClass klass = PacketClass::Unicast;
  long long present_cycle = -1;
  long long inject_cycle = -1;
  long long deliver_cycle = -1;

  // Measured from router entry, matching the zero-load formula.
  long long latency() const { return deliver_cycle - inject_cycle; }
  bool operator==(const LatencyRecord&) const = default;
};

struct SimStats {
  EventCounters totals;
  std::vector<EventCounters> per_router;  // row-major, y * n + x
  std::vector<LatencyRecord> latencies;
  long long packets_injected = 0;
  long long packets_delivered = 0;
  long long flits_created = 0;
  long long flits_retired = 0;
  long long total_cycles = 0;

  bool operator==(const SimStats&) const = default;
  std::string to_string() const;
};

}  // namespace ina::noc

#endif
