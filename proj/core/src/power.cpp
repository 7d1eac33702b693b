#include "inasim/power.hpp"

#include <sstream>

#include "inasim/layer.hpp"

namespace ina::power {

double to_double(const Ratio& r) { return r.convert_to<double>(); }

std::string to_string(const Ratio& r) {
  std::ostringstream out;
  out << numerator(r) << "/" << denominator(r);
  return out.str();
}

void EnergyCoefficients::validate(bool ina_enabled) const {
  const Ratio* all[] = {&buffer_write, &buffer_read,  &crossbar_traversal,
                        &arbitration,  &link_traversal, &ni_inject,
                        &ni_eject,     &ina_add,        &operand_latch};
  for (const Ratio* c : all) {
    if (*c < Ratio{0}) throw ConfigError("energy coefficients must be >= 0");
  }
  if (ina_enabled && ina_add <= Ratio{0}) {
    throw ConfigError("ina_add energy must be > 0 when accumulation is on");
  }
}

Ratio EnergyReport::total() const {
  return buffer_write + buffer_read + crossbar_traversal + arbitration +
         link_traversal + ni_inject + ni_eject + ina_add + operand_latch;
}

std::string EnergyReport::to_string() const {
  std::ostringstream out;
  out << "layer=" << meta.layer << " mesh=" << meta.n << " pes=" << meta.e
      << " mode=" << meta.mode << " seed=" << meta.seed << "\n"
      << "buffer_write=" << power::to_string(buffer_write)
      << " buffer_read=" << power::to_string(buffer_read)
      << " crossbar=" << power::to_string(crossbar_traversal)
      << " arbitration=" << power::to_string(arbitration)
      << " link=" << power::to_string(link_traversal)
      << " ni_inject=" << power::to_string(ni_inject)
      << " ni_eject=" << power::to_string(ni_eject)
      << " ina_add=" << power::to_string(ina_add)
      << " operand_latch=" << power::to_string(operand_latch)
      << " total=" << power::to_string(total());
  return out.str();
}

EnergyReport tally(const noc::SimStats& stats, const EnergyCoefficients& coeffs,
                   RunMeta meta) {
  const auto& c = stats.totals;
  EnergyReport report;
  report.meta = std::move(meta);
  report.buffer_write = coeffs.buffer_write * c.buffer_write;
  report.buffer_read = coeffs.buffer_read * c.buffer_read;
  report.crossbar_traversal = coeffs.crossbar_traversal * c.crossbar_traversal;
  report.arbitration = coeffs.arbitration * c.arbitration;
  report.link_traversal = coeffs.link_traversal * c.link_traversal;
  report.ni_inject = coeffs.ni_inject * c.ni_inject;
  report.ni_eject = coeffs.ni_eject * c.ni_eject;
  report.ina_add = coeffs.ina_add * c.ina_add;
  report.operand_latch = coeffs.operand_latch * c.operand_latch;
  return report;
}

Ratio improvement(const Ratio& baseline, const Ratio& variant) {
  if (variant == Ratio{0}) throw ConfigError("improvement over a zero total");
  return baseline / variant;
}

Ratio energy_improvement(const EnergyReport& baseline,
                         const EnergyReport& variant) {
  if (!baseline.meta.comparable(variant.meta)) {
    throw MetadataMismatch("improvement requires matching layer/mesh/E/seed: " +
                           baseline.meta.layer + " vs " + variant.meta.layer);
  }
  return improvement(baseline.total(), variant.total());
}

}  // namespace ina::power
