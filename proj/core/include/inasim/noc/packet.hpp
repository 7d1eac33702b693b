#ifndef INASIM_NOC_PACKET_HPP
#define INASIM_NOC_PACKET_HPP

#include <cstdint>
#include <vector>

namespace ina::noc {

struct NodeAddress {
  int x = 0;
  int y = 0;
  bool operator==(const NodeAddress&) const = default;
};

enum class PacketClass { Unicast, Stream, InaChain, Gather };

const char* packet_class_name(PacketClass c);

enum class Port { North, East, South, West, Local };
constexpr int kPorts = 5;

// XY dimension-order routing: x first, then y. Local when current == dst.
Port route_compute(NodeAddress current, NodeAddress dst);

enum class FlitKind { Head, Body, Tail, HeadTail };

struct Flit {
  FlitKind kind = FlitKind::HeadTail;
  long long packet_id = -1;
  int seq = 0;  // position within the packet
  int vc = 0;

  bool head() const { return kind == FlitKind::Head || kind == FlitKind::HeadTail; }
  bool tail() const { return kind == FlitKind::Tail || kind == FlitKind::HeadTail; }
};

// How routers along the way treat an ina_chain packet.
enum class ChainMode {
  None,          // not a chain
  InNetwork,     // accumulate in the router pipeline, no NI transactions
  EjectInject    // eject/accumulate/inject detour at accumulating routers
};

struct Packet {
  long long id = -1;
  PacketClass klass = PacketClass::Unicast;
  NodeAddress src, dst;
  long long flit_count = 1;
  std::vector<uint32_t> payload;
  std::vector<bool> slot_filled;  // gather slot occupancy

  // ina_chain / gather correlation
  long long chain_id = -1;
  long long round = -1;
  ChainMode chain_mode = ChainMode::None;
  // InNetwork chains that end in the router's collection buffer instead of
  // being ejected at dst (layer runs feed the row gather this way).
  bool absorb_at_end = false;
  long long gather_slot = -1;  // slot the absorbed result occupies in the row gather

  long long present_cycle = -1;  // handed to the NI
  long long inject_cycle = -1;   // head flit entered the source router
  long long deliver_cycle = -1;  // ejection (or absorption) complete
  bool delivered = false;
};

}  // namespace ina::noc

#endif
