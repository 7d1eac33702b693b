#ifndef INASIM_ANALYTIC_HPP
#define INASIM_ANALYTIC_HPP

#include <optional>
#include <string>
#include <vector>

#include "inasim/layer.hpp"

namespace ina::analytic {

class UnmappableLayerError : public std::runtime_error {
 public:
  explicit UnmappableLayerError(const std::string& what)
      : std::runtime_error(what) {}
};

// Result of the round model for one layer on one mesh.
struct InaPlan {
  bool needs_ina = false;
  long long pe_count = 1;               // P#
  std::optional<long long> rounds;      // empty means NA
};

// True when one filter's weights exceed a single PE's memory.
bool requires_ina(const LayerShape& layer, const Precision& q, const PeMemory& mem);

// Number of PEs sharing one filter's weights (ceil of bit ratio), always >= 1.
long long pe_count(const LayerShape& layer, const Precision& q, const PeMemory& mem);

// Accumulation rounds to finish one layer on an N x N mesh with 1 PE/router.
// rounds is NA when requires_ina is false, unless force_rounds is set.
// Throws UnmappableLayerError when P# > N.
InaPlan ina_rounds(const LayerShape& layer, const MeshShape& mesh,
                   const Precision& q, const PeMemory& mem,
                   bool force_rounds = false);

// Same with E PEs per router.
InaPlan ina_rounds_multi_pe(const LayerShape& layer, const MeshShape& mesh,
                            const Precision& q, const PeMemory& mem,
                            bool force_rounds = false);

struct TableRow {
  LayerShape layer;
  long long pe_count = 1;
  // One entry per requested mesh: rounds, NA, or an error message.
  struct Cell {
    std::optional<long long> rounds;
    std::string error;
  };
  std::vector<Cell> cells;
};

struct TableReport {
  std::vector<MeshShape> meshes;
  std::vector<TableRow> rows;

  // Delimiter-separated rendering, "NA" rendered literally.
  std::string render(char delimiter = ',') const;
};

TableReport table_report(const std::vector<LayerShape>& network,
                         const std::vector<MeshShape>& meshes,
                         const Precision& q, const PeMemory& mem,
                         bool force_rounds = false);

}  // namespace ina::analytic

#endif
