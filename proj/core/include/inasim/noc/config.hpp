#ifndef INASIM_NOC_CONFIG_HPP
#define INASIM_NOC_CONFIG_HPP

#include <cstdint>

#include "inasim/layer.hpp"

namespace ina::noc {

// Mesh and router parameters. Defaults follow the 8x8 configuration used
// throughout the experiments.
struct MeshConfig {
  long long n = 8;               // N x N routers
  long long pes_per_router = 1;  // E
  long long memory_bits = 32768; // M, per PE
  int vcs = 2;
  int buffer_depth = 4;          // flits per VC
  int flit_width_bits = 128;
  int router_latency = 4;        // cycles through an uncontended router
  int link_latency = 1;
  int ni_inject_latency = 2;
  int ni_eject_latency = 2;
  int local_acc_latency = 1;     // PE-side re-accumulation turnaround
  int ni_queue_packets = 4;      // injection queue capacity
  long long livelock_bound = 1000000;

  void validate() const {
    if (n < 2) throw ConfigError("mesh side must be >= 2");
    if (pes_per_router < 1) throw ConfigError("PEs per router must be >= 1");
    if (buffer_depth < 1) throw ConfigError("buffer depth must be >= 1");
    if (vcs < 1) throw ConfigError("need at least one virtual channel");
    if (flit_width_bits < 32 || flit_width_bits % 32 != 0)
      throw ConfigError("flit width must be a positive multiple of 32 bits");
  }

  // Payload words that fit in one flit.
  int words_per_flit() const { return flit_width_bits / 32; }

  // 1 header flit plus enough flits for the payload.
  long long packet_flits(long long payload_words) const {
    int wpf = words_per_flit();
    return 1 + (payload_words + wpf - 1) / wpf;
  }
};

}  // namespace ina::noc

#endif
