#ifndef INASIM_LAYER_HPP
#define INASIM_LAYER_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ina {

// One CONV layer: R x R kernel, C input channels, F filters, O x O output map.
struct LayerShape {
  std::string name;
  long long kernel = 1;    // R
  long long channels = 1;  // C
  long long filters = 1;   // F
  long long output = 1;    // O
  long long batch = 1;     // input activation count; stored, unused by the round model

  long long weight_elems() const { return channels * kernel * kernel; }
  void validate() const;
};

struct Precision {
  long long bits = 32;  // q
  void validate() const;
};

struct PeMemory {
  long long bits = 32768;  // M; interpreted in bits throughout
  void validate(const Precision& q) const;
};

struct MeshShape {
  long long n = 8;  // N x N routers
  long long e = 1;  // PEs per router
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Loads a line-oriented layer table: one "name R C F O" record per line,
// '#' starts a comment.
std::vector<LayerShape> load_layer_file(const std::string& path);
std::vector<LayerShape> parse_layer_records(const std::string& text,
                                            const std::string& origin);

}  // namespace ina

#endif
