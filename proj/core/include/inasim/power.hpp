#ifndef INASIM_POWER_HPP
#define INASIM_POWER_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "inasim/noc/stats.hpp"

namespace ina::power {

// Exact arithmetic end to end: totals and improvement ratios carry no
// floating-point drift, and arbitrary precision keeps long sweeps from
// overflowing.
using Ratio = boost::multiprecision::cpp_rational;

double to_double(const Ratio& r);
std::string to_string(const Ratio& r);  // "num/den"

// Energy per event, arbitrary units. operand_latch covers the NI-side operand
// register and defaults to free; it is tracked separately so the accounting
// can be audited.
struct EnergyCoefficients {
  Ratio buffer_write{1};
  Ratio buffer_read{1};
  Ratio crossbar_traversal{3, 2};
  Ratio arbitration{1, 5};
  Ratio link_traversal{2};
  Ratio ni_inject{2};
  Ratio ni_eject{2};
  Ratio ina_add{4, 5};
  Ratio operand_latch{0};

  // All coefficients non-negative; the adder must cost something when
  // accumulating routers are in use.
  void validate(bool ina_enabled) const;
  bool operator==(const EnergyCoefficients&) const = default;
};

struct RunMeta {
  std::string layer;
  long long n = 8;
  long long e = 1;
  std::string mode;
  uint64_t seed = 1;

  bool comparable(const RunMeta& other) const {
    return layer == other.layer && n == other.n && e == other.e &&
           seed == other.seed;
  }
  bool operator==(const RunMeta&) const = default;
};

class MetadataMismatch : public std::runtime_error {
 public:
  explicit MetadataMismatch(const std::string& what)
      : std::runtime_error(what) {}
};

struct EnergyReport {
  RunMeta meta;
  Ratio buffer_write{0}, buffer_read{0}, crossbar_traversal{0}, arbitration{0},
      link_traversal{0}, ni_inject{0}, ni_eject{0}, ina_add{0},
      operand_latch{0};

  Ratio total() const;
  std::string to_string() const;
  bool operator==(const EnergyReport&) const = default;
};

EnergyReport tally(const noc::SimStats& stats, const EnergyCoefficients& coeffs,
                   RunMeta meta);

// baseline / variant; > 1 means the variant is cheaper.
Ratio improvement(const Ratio& baseline, const Ratio& variant);
// Checks the two runs measured the same (layer, mesh, E, seed).
Ratio energy_improvement(const EnergyReport& baseline,
                         const EnergyReport& variant);

}  // namespace ina::power

#endif
