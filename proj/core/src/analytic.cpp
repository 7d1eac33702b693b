#include "inasim/analytic.hpp"

#include <sstream>

namespace ina::analytic {

namespace {

long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

void validate_inputs(const LayerShape& layer, const Precision& q,
                     const PeMemory& mem) {
  layer.validate();
  q.validate();
  mem.validate(q);
}

}  // namespace

bool requires_ina(const LayerShape& layer, const Precision& q,
                  const PeMemory& mem) {
  validate_inputs(layer, q, mem);
  return layer.weight_elems() * q.bits > mem.bits;
}

long long pe_count(const LayerShape& layer, const Precision& q,
                   const PeMemory& mem) {
  validate_inputs(layer, q, mem);
  return ceil_div(layer.weight_elems() * q.bits, mem.bits);
}

InaPlan ina_rounds_multi_pe(const LayerShape& layer, const MeshShape& mesh,
                            const Precision& q, const PeMemory& mem,
                            bool force_rounds) {
  validate_inputs(layer, q, mem);
  mesh.validate();

  InaPlan plan;
  plan.needs_ina = requires_ina(layer, q, mem);
  plan.pe_count = pe_count(layer, q, mem);
  if (plan.pe_count > mesh.n) {
    throw UnmappableLayerError("layer '" + layer.name + "' needs " +
                               std::to_string(plan.pe_count) +
                               " PEs per filter but the mesh side is " +
                               std::to_string(mesh.n));
  }
  if (!plan.needs_ina && !force_rounds) return plan;  // rounds stays NA

  // ceil((F / (N*E)) * (O*O / floor(N/P#))) applied to the whole product,
  // evaluated exactly in integers.
  long long groups = mesh.n / plan.pe_count;
  long long work = layer.filters * layer.output * layer.output;
  plan.rounds = ceil_div(work, mesh.n * mesh.e * groups);
  return plan;
}

InaPlan ina_rounds(const LayerShape& layer, const MeshShape& mesh,
                   const Precision& q, const PeMemory& mem, bool force_rounds) {
  MeshShape single = mesh;
  single.e = 1;
  return ina_rounds_multi_pe(layer, single, q, mem, force_rounds);
}

TableReport table_report(const std::vector<LayerShape>& network,
                         const std::vector<MeshShape>& meshes,
                         const Precision& q, const PeMemory& mem,
                         bool force_rounds) {
  TableReport report;
  report.meshes = meshes;
  for (const auto& layer : network) {
    TableRow row;
    row.layer = layer;
    row.pe_count = pe_count(layer, q, mem);
    for (const auto& mesh : meshes) {
      TableRow::Cell cell;
      try {
        cell.rounds = ina_rounds_multi_pe(layer, mesh, q, mem, force_rounds).rounds;
      } catch (const UnmappableLayerError& err) {
        cell.error = err.what();
      }
      row.cells.push_back(std::move(cell));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string TableReport::render(char d) const {
  std::ostringstream out;
  out << "layer" << d << "R" << d << "C" << d << "F" << d << "O" << d << "P#";
  for (const auto& mesh : meshes) {
    out << d << "INA#_N" << mesh.n;
    if (mesh.e != 1) out << "_E" << mesh.e;
  }
  out << "\n";
  for (const auto& row : rows) {
    out << row.layer.name << d << row.layer.kernel << d << row.layer.channels
        << d << row.layer.filters << d << row.layer.output << d << row.pe_count;
    for (const auto& cell : row.cells) {
      out << d;
      if (!cell.error.empty())
        out << "unmappable";
      else if (cell.rounds)
        out << *cell.rounds;
      else
        out << "NA";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace ina::analytic
