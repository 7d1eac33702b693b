#ifndef INASIM_TRAFFIC_PARTITION_HPP
#define INASIM_TRAFFIC_PARTITION_HPP

#include <vector>

#include "inasim/analytic.hpp"
#include "inasim/layer.hpp"

namespace ina::traffic {

// How one filter's C*R*R weight elements split across column-adjacent PEs.
// Parts are capacity-sized except the last (remainder), so every part obeys
// size * q <= M and the sizes cover the vector exactly.
struct PartitionPlan {
  long long part_count = 1;
  long long capacity = 0;           // elements one PE can hold (M / q)
  std::vector<long long> sizes;     // elements per part
  std::vector<long long> offsets;   // start index of each part

  long long total() const;
};

// Throws UnmappableLayerError when the parts exceed one mesh column.
PartitionPlan split_weights(const LayerShape& layer, const Precision& q,
                            const PeMemory& mem, const MeshShape& mesh);

}  // namespace ina::traffic

#endif
