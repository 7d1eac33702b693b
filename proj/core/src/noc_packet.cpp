#include "inasim/noc/packet.hpp"

namespace ina::noc {

const char* packet_class_name(PacketClass c) {
  switch (c) {
    case PacketClass::Unicast: return "unicast";
    case PacketClass::Stream: return "stream";
    case PacketClass::InaChain: return "ina_chain";
    case PacketClass::Gather: return "gather";
  }
  return "?";
}

Port route_compute(NodeAddress current, NodeAddress dst) {
  if (dst.x > current.x) return Port::East;
  if (dst.x < current.x) return Port::West;
  if (dst.y > current.y) return Port::North;
  if (dst.y < current.y) return Port::South;
  return Port::Local;
}

}  // namespace ina::noc
