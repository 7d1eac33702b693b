#include "inasim/noc/stats.hpp"

#include <sstream>

namespace ina::noc {

EventCounters& EventCounters::operator+=(const EventCounters& o) {
  buffer_write += o.buffer_write;
  buffer_read += o.buffer_read;
  crossbar_traversal += o.crossbar_traversal;
  arbitration += o.arbitration;
  link_traversal += o.link_traversal;
  ni_inject += o.ni_inject;
  ni_eject += o.ni_eject;
  ina_add += o.ina_add;
  operand_latch += o.operand_latch;
  return *this;
}

std::string SimStats::to_string() const {
  std::ostringstream out;
  out << "cycles=" << total_cycles << " injected=" << packets_injected
      << " delivered=" << packets_delivered << " flits=" << flits_created
      << "/" << flits_retired << "\n";
  out << "buffer_write=" << totals.buffer_write
      << " buffer_read=" << totals.buffer_read
      << " crossbar=" << totals.crossbar_traversal
      << " arbitration=" << totals.arbitration
      << " link=" << totals.link_traversal << " ni_inject=" << totals.ni_inject
      << " ni_eject=" << totals.ni_eject << " ina_add=" << totals.ina_add
      << " operand_latch=" << totals.operand_latch << "\n";
  for (const auto& rec : latencies) {
    out << "pkt " << rec.packet_id << " " << packet_class_name(rec.klass)
        << " present=" << rec.present_cycle << " inject=" << rec.inject_cycle
        << " deliver=" << rec.deliver_cycle << "\n";
  }
  return out.str();
}

}  // namespace ina::noc
