#ifndef INASIM_TRAFFIC_SCHEDULE_HPP
#define INASIM_TRAFFIC_SCHEDULE_HPP

#include <optional>
#include <vector>

#include "inasim/noc/packet.hpp"
#include "inasim/traffic/partition.hpp"

namespace ina::traffic {

enum class Dataflow { WeightStationary, OutputStationary };

// One (filter, output pixel) assignment for a lane in a round.
struct WorkItem {
  long long filter = 0;
  long long pixel = 0;
};

// Off-mesh streaming-bus delivery from the west edge to one PE slot.
struct StreamOp {
  noc::NodeAddress dst;
  long long slot = 0;     // PE index within the router
  long long part = 0;
  long long words = 0;
  bool weights = false;   // false: input activations
  long long filter = -1;  // resident filter after this stream (weights only)
};

// One psum chain: column c, group g, spanning the group's part rows.
struct ChainOp {
  long long chain_id = -1;
  long long column = 0;
  long long group = 0;
};

struct RoundPlan {
  long long round = 0;
  std::vector<StreamOp> weight_streams;
  std::vector<StreamOp> input_streams;
  std::vector<ChainOp> chains;           // empty when part_count == 1
  std::vector<long long> gather_rows;    // rows with results this round
};

// A layer mapped onto the mesh: lane geometry, round count, per-round ops.
//
// Lanes are (column, group, slot) triples; group g occupies rows
// g*P .. g*P+P-1 of every column, part 0 lowest, chains flow south to north.
// Work items walk filter-major: item i covers filter i/O^2, pixel i%O^2.
struct Schedule {
  LayerShape layer;
  MeshShape mesh;
  Dataflow dataflow = Dataflow::WeightStationary;
  bool ina_enabled = true;
  uint64_t seed = 1;
  PartitionPlan parts;      // OS: one part holding the whole vector
  long long groups = 1;     // G; OS: N (every router its own group)
  long long total_rounds = 0;
  long long rounds = 0;     // simulated rounds (total capped)

  long long lanes() const { return mesh.n * groups * mesh.e; }
  long long lane_index(long long column, long long group, long long slot) const {
    return (group * mesh.n + column) * mesh.e + slot;
  }
  long long part_row(long long group, long long part) const {
    return group * parts.part_count + part;
  }
  long long final_row(long long group) const {
    return part_row(group, parts.part_count - 1);
  }
  long long group_of_row(long long row) const { return row / parts.part_count; }

  // Assignment of a lane in round t; empty past the end of the layer.
  std::optional<WorkItem> item(long long round, long long lane) const;
  bool lane_active(long long round, long long column, long long group,
                   long long slot) const;
  bool group_active(long long round, long long column, long long group) const;

  RoundPlan round_plan(long long round) const;
};

Schedule gen_ws_trace(const LayerShape& layer, const MeshShape& mesh,
                      const Precision& q, const PeMemory& mem,
                      bool ina_enabled,
                      std::optional<long long> rounds_cap, uint64_t seed);

Schedule gen_os_trace(const LayerShape& layer, const MeshShape& mesh,
                      const Precision& q, const PeMemory& mem,
                      std::optional<long long> rounds_cap, uint64_t seed);

}  // namespace ina::traffic

#endif
