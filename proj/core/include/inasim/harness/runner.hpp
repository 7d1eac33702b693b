#ifndef INASIM_HARNESS_RUNNER_HPP
#define INASIM_HARNESS_RUNNER_HPP

#include <iosfwd>
#include <optional>

#include "inasim/noc/network.hpp"
#include "inasim/traffic/schedule.hpp"
#include "inasim/traffic/trace.hpp"

namespace ina::harness {

enum class Mode { WsIna, WsPlain, OsGather };

const char* mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

struct RunOptions {
  // Timing/buffer template; n and pes_per_router are taken from the schedule.
  noc::MeshConfig base;
  bool collect_trace = false;
  // Check every gathered word against the convolution oracle.
  bool verify = false;
  std::ostream* event_log = nullptr;
};

struct RunResult {
  noc::SimStats stats;
  long long rounds = 0;
  long long cycles = 0;
  long long verified_words = 0;
  long long mismatched_words = 0;
  std::vector<traffic::TraceEvent> trace;
};

traffic::Schedule make_schedule(const LayerShape& layer, Mode mode,
                                const MeshShape& mesh, const Precision& q,
                                const PeMemory& mem,
                                std::optional<long long> rounds_cap,
                                uint64_t seed);

// Executes a schedule round by round on a fresh mesh: streams are tallied on
// the edge buses, psum chains and row gathers run through the network, and a
// barrier separates rounds.
RunResult run_schedule(const traffic::Schedule& schedule,
                       const RunOptions& opts);

}  // namespace ina::harness

#endif
