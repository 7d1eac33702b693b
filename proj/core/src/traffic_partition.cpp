#include "inasim/traffic/partition.hpp"

#include <numeric>

namespace ina::traffic {

long long PartitionPlan::total() const {
  return std::accumulate(sizes.begin(), sizes.end(), 0ll);
}

PartitionPlan split_weights(const LayerShape& layer, const Precision& q,
                            const PeMemory& mem, const MeshShape& mesh) {
  layer.validate();
  q.validate();
  mem.validate(q);
  mesh.validate();

  PartitionPlan plan;
  plan.capacity = mem.bits / q.bits;
  plan.part_count = analytic::pe_count(layer, q, mem);
  if (plan.part_count > mesh.n) {
    throw analytic::UnmappableLayerError(
        layer.name + ": a filter needs " + std::to_string(plan.part_count) +
        " PEs but a column has only " + std::to_string(mesh.n));
  }
  long long remaining = layer.weight_elems();
  long long offset = 0;
  while (remaining > 0) {
    long long take = std::min(plan.capacity, remaining);
    plan.sizes.push_back(take);
    plan.offsets.push_back(offset);
    offset += take;
    remaining -= take;
  }
  // pe_count and the greedy split agree because q divides M.
  if (static_cast<long long>(plan.sizes.size()) != plan.part_count) {
    throw ConfigError(layer.name + ": partition does not match the PE count");
  }
  return plan;
}

}  // namespace ina::traffic
