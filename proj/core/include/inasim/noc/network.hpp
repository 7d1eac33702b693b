#ifndef INASIM_NOC_NETWORK_HPP
#define INASIM_NOC_NETWORK_HPP

#include <array>
#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <vector>

#include "inasim/noc/config.hpp"
#include "inasim/noc/ina.hpp"
#include "inasim/noc/packet.hpp"
#include "inasim/noc/stats.hpp"

namespace ina::noc {

class LivelockError : public std::runtime_error {
 public:
  explicit LivelockError(const std::string& what) : std::runtime_error(what) {}
};

struct SimEvent {
  enum class Kind { Delivered, InaAccumulate };
  Kind kind = Kind::Delivered;
  long long cycle = 0;
  NodeAddress node;
  long long packet_id = -1;
  long long chain_id = -1;
  uint32_t value = 0;
};

int class_vc(PacketClass klass, int vcs);

// Cycle-accurate N x N wormhole mesh: 4-stage routers (buffer write/route
// compute, VC allocation, switch allocation, switch traversal), credit-based
// flow control, XY routing, per-class virtual channels.
class Network {
 public:
  explicit Network(const MeshConfig& config);

  const MeshConfig& config() const { return config_; }
  long long now() const { return cycle_; }
  long long router_count() const { return config_.n * config_.n; }
  long long link_count() const { return 2 * config_.n * (config_.n - 1); }

  // Queues a packet at its source NI. Returns the packet id, or nullopt on
  // backpressure (caller retries next cycle).
  std::optional<long long> inject(Packet pkt);

  // Advances exactly one cycle and returns this cycle's delivery and
  // accumulation events.
  std::vector<SimEvent> step();

  bool idle() const;
  // Earliest cycle at which anything can happen, or -1 when idle.
  long long next_activity() const;
  // Jumps the clock forward across a provably idle gap.
  void skip_to(long long cycle);

  // Announces the local PE's partial sum for a chain at a router. Chain heads
  // matching (chain_id, round) accumulate here; ready_cycle models compute
  // time.
  void post_chain_operand(NodeAddress node, long long chain_id, long long round,
                          std::vector<uint32_t> values, long long ready_cycle);

  // Announces a local gather contribution; a passing gather packet of the
  // same round latches it into its payload slots.
  void post_gather_operand(NodeAddress node, long long round,
                           long long slot_index, std::vector<uint32_t> values,
                           long long ready_cycle);

  // Off-mesh streaming-bus transfer: tallied for energy, no mesh traffic.
  void tally_bus_transfer(NodeAddress dst, long long flits, long long hops);

  // Counts a PE-side injection that hands a value to the local router
  // (the eject/accumulate/inject flow's re-injection step).
  void tally_ni_inject(NodeAddress node);

  void set_ina_enabled(bool on) { ina_enabled_ = on; }
  bool ina_enabled() const { return ina_enabled_; }
  void set_event_log(std::ostream* log) { log_ = log; }

  const Packet& packet(long long id) const { return packets_.at(id); }
  const SimStats& stats() const { return stats_; }

 private:
  struct BufFlit {
    Flit flit;
    long long arrive = 0;
    long long st_ready = 0;
    bool acc_at_st = false;  // in-network accumulation fires at traversal
  };
  struct InputVc {
    std::deque<BufFlit> q;
    long long owner = -1;
    bool out_granted = false;
    Port out_port = Port::Local;
  };
  struct GatherOperand {
    long long round = -1;
    long long slot = -1;
    std::vector<uint32_t> values;
    long long ready_cycle = 0;
  };
  struct RouterState {
    std::vector<std::array<InputVc, 2>> in;      // [port][vc]
    std::vector<std::array<int, 2>> credits;     // [out port][vc]
    std::array<int, kPorts> sw_rr{};
    std::vector<PendingOperand> pending;
    std::vector<GatherOperand> gather_ops;
    InaUnitState ina_unit;
    long long ina_busy_cycle = -1;
  };
  struct NiState {
    std::deque<long long> inject_q;
    long long sent_flits = 0;
  };

  int rid(NodeAddress a) const { return a.y * static_cast<int>(config_.n) + a.x; }
  NodeAddress addr(int id) const {
    int n = static_cast<int>(config_.n);
    return {id % n, id / n};
  }
  bool has_neighbor(NodeAddress a, Port p) const;
  NodeAddress neighbor(NodeAddress a, Port p) const;

  void process_arrivals(std::vector<SimEvent>& events);
  void process_ni_inject();
  void process_vc_allocation();
  void process_switch(std::vector<SimEvent>& events);
  void process_deliveries(std::vector<SimEvent>& events);
  void on_head_arrival(NodeAddress node, RouterState& router, InputVc& vc,
                       BufFlit& bf);
  void retire_to_local(NodeAddress node, const BufFlit& bf,
                       std::vector<SimEvent>& events);
  void check_livelock();
  void log_event(long long cycle, NodeAddress node, const char* kind,
                 long long id, long long vc_or_value);

  MeshConfig config_;
  long long cycle_ = 0;
  bool ina_enabled_ = true;
  std::vector<RouterState> routers_;
  std::vector<NiState> nis_;
  std::vector<Packet> packets_;
  std::map<long long, std::vector<std::tuple<int, Port, Flit>>> arrivals_;
  std::map<long long, std::vector<long long>> deliveries_;
  long long flits_in_routers_ = 0;
  SimStats stats_;
  std::ostream* log_ = nullptr;
};

// Presents each packet at its present_cycle (retrying under backpressure),
// steps until all traffic drains, and returns the stats.
SimStats run_until_drained(Network& net, std::vector<Packet> trace);

}  // namespace ina::noc

#endif
