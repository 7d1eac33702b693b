#include "inasim/layer.hpp"

#include <fstream>
#include <sstream>

namespace ina {

void LayerShape::validate() const {
  if (kernel < 1 || channels < 1 || filters < 1 || output < 1 || batch < 1) {
    throw ConfigError("layer '" + name + "': R, C, F, O, batch must all be >= 1");
  }
}

void Precision::validate() const {
  if (bits != 8 && bits != 16 && bits != 32) {
    throw ConfigError("precision must be 8, 16 or 32 bits");
  }
}

void PeMemory::validate(const Precision& q) const {
  if (bits < q.bits) {
    throw ConfigError("PE memory must hold at least one value");
  }
  if (bits % q.bits != 0) {
    // Keeps the capacity-in-elements partition consistent with the
    // bit-level PE-count formula.
    throw ConfigError("PE memory must be a multiple of the precision");
  }
}

void MeshShape::validate() const {
  if (n < 2) throw ConfigError("mesh side must be >= 2");
  if (e < 1) throw ConfigError("PEs per router must be >= 1");
}

std::vector<LayerShape> parse_layer_records(const std::string& text,
                                            const std::string& origin) {
  std::vector<LayerShape> layers;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    LayerShape layer;
    if (!(fields >> layer.name)) continue;  // blank line
    if (!(fields >> layer.kernel >> layer.channels >> layer.filters >> layer.output)) {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'name R C F O'");
    }
    long long batch;
    if (fields >> batch) layer.batch = batch;
    layer.validate();
    layers.push_back(std::move(layer));
  }
  return layers;
}

std::vector<LayerShape> load_layer_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open layer file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_layer_records(buf.str(), path);
}

}  // namespace ina
