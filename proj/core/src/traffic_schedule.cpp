#include "inasim/traffic/schedule.hpp"

#include <algorithm>

namespace ina::traffic {

namespace {

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

}  // namespace

std::optional<WorkItem> Schedule::item(long long round, long long lane) const {
  long long i = round * lanes() + lane;
  long long o2 = layer.output * layer.output;
  if (i >= layer.filters * o2) return std::nullopt;
  return WorkItem{i / o2, i % o2};
}

bool Schedule::lane_active(long long round, long long column, long long group,
                           long long slot) const {
  return item(round, lane_index(column, group, slot)).has_value();
}

bool Schedule::group_active(long long round, long long column,
                            long long group) const {
  // Active lanes form a prefix in lane order, so slot 0 decides.
  return lane_active(round, column, group, 0);
}

RoundPlan Schedule::round_plan(long long round) const {
  RoundPlan plan;
  plan.round = round;
  bool restream_always = dataflow == Dataflow::OutputStationary;
  for (long long g = 0; g < groups; ++g) {
    bool row_used = false;
    for (long long c = 0; c < mesh.n; ++c) {
      bool any = false;
      for (long long s = 0; s < mesh.e; ++s) {
        long long lane = lane_index(c, g, s);
        auto work = item(round, lane);
        if (!work) continue;
        any = true;
        bool rotated =
            round == 0 || restream_always ||
            item(round - 1, lane)->filter != work->filter;
        for (long long j = 0; j < parts.part_count; ++j) {
          StreamOp op;
          op.dst = {static_cast<int>(c), static_cast<int>(part_row(g, j))};
          op.slot = s;
          op.part = j;
          op.words = parts.sizes[j];
          if (rotated) {
            op.weights = true;
            op.filter = work->filter;
            plan.weight_streams.push_back(op);
          }
          op.weights = false;
          op.filter = -1;
          plan.input_streams.push_back(op);
        }
      }
      if (!any) continue;
      row_used = true;
      if (parts.part_count >= 2) {
        plan.chains.push_back({g * mesh.n + c, c, g});
      }
    }
    if (row_used) plan.gather_rows.push_back(final_row(g));
  }
  return plan;
}

static Schedule make_schedule(const LayerShape& layer, const MeshShape& mesh,
                              Dataflow dataflow, bool ina_enabled,
                              PartitionPlan parts, long long groups,
                              std::optional<long long> rounds_cap,
                              uint64_t seed) {
  Schedule s;
  s.layer = layer;
  s.mesh = mesh;
  s.dataflow = dataflow;
  s.ina_enabled = ina_enabled;
  s.seed = seed;
  s.parts = std::move(parts);
  s.groups = groups;
  s.total_rounds =
      ceil_div(layer.filters * layer.output * layer.output, s.lanes());
  s.rounds = rounds_cap ? std::min(s.total_rounds, *rounds_cap)
                        : s.total_rounds;
  return s;
}

Schedule gen_ws_trace(const LayerShape& layer, const MeshShape& mesh,
                      const Precision& q, const PeMemory& mem,
                      bool ina_enabled,
                      std::optional<long long> rounds_cap, uint64_t seed) {
  PartitionPlan parts = split_weights(layer, q, mem, mesh);
  long long groups = mesh.n / parts.part_count;
  return make_schedule(layer, mesh, Dataflow::WeightStationary, ina_enabled,
                       std::move(parts), groups, rounds_cap, seed);
}

Schedule gen_os_trace(const LayerShape& layer, const MeshShape& mesh,
                      const Precision& q, const PeMemory& mem,
                      std::optional<long long> rounds_cap, uint64_t seed) {
  layer.validate();
  q.validate();
  mem.validate(q);
  mesh.validate();
  // Outputs stay local: the whole weight vector streams through each PE, so
  // there is a single "part" and no capacity bound.
  PartitionPlan whole;
  whole.part_count = 1;
  whole.capacity = layer.weight_elems();
  whole.sizes = {layer.weight_elems()};
  whole.offsets = {0};
  return make_schedule(layer, mesh, Dataflow::OutputStationary,
                       /*ina_enabled=*/false, std::move(whole), mesh.n,
                       rounds_cap, seed);
}

}  // namespace ina::traffic
