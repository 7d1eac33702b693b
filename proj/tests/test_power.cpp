#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "inasim/layer.hpp"
#include "inasim/power.hpp"

using namespace ina;
using namespace ina::power;

namespace {

noc::SimStats random_stats(uint64_t seed) {
  std::mt19937_64 rng(seed);
  noc::SimStats stats;
  stats.totals.buffer_write = static_cast<long long>(rng() % 100000);
  stats.totals.buffer_read = static_cast<long long>(rng() % 100000);
  stats.totals.crossbar_traversal = static_cast<long long>(rng() % 100000);
  stats.totals.arbitration = static_cast<long long>(rng() % 100000);
  stats.totals.link_traversal = static_cast<long long>(rng() % 100000);
  stats.totals.ni_inject = static_cast<long long>(rng() % 100000);
  stats.totals.ni_eject = static_cast<long long>(rng() % 100000);
  stats.totals.ina_add = static_cast<long long>(rng() % 100000);
  stats.totals.operand_latch = static_cast<long long>(rng() % 100000);
  return stats;
}

}  // namespace

TEST_CASE("no events, no energy") {
  noc::SimStats stats;
  auto report = tally(stats, EnergyCoefficients{}, {"L", 8, 1, "ws_ina", 1});
  CHECK(report.total() == 0);
  CHECK(report.meta.layer == "L");
}

TEST_CASE("each counter couples to exactly its coefficient") {
  struct Probe {
    long long noc::EventCounters::* counter;
    Ratio EnergyCoefficients::* coeff;
  };
  const Probe probes[] = {
      {&noc::EventCounters::buffer_write, &EnergyCoefficients::buffer_write},
      {&noc::EventCounters::buffer_read, &EnergyCoefficients::buffer_read},
      {&noc::EventCounters::crossbar_traversal,
       &EnergyCoefficients::crossbar_traversal},
      {&noc::EventCounters::arbitration, &EnergyCoefficients::arbitration},
      {&noc::EventCounters::link_traversal,
       &EnergyCoefficients::link_traversal},
      {&noc::EventCounters::ni_inject, &EnergyCoefficients::ni_inject},
      {&noc::EventCounters::ni_eject, &EnergyCoefficients::ni_eject},
      {&noc::EventCounters::ina_add, &EnergyCoefficients::ina_add},
      {&noc::EventCounters::operand_latch, &EnergyCoefficients::operand_latch},
  };
  for (const auto& probe : probes) {
    noc::SimStats stats;
    stats.totals.*probe.counter = 7;
    EnergyCoefficients coeffs;  // isolate: everything else zero
    coeffs = EnergyCoefficients{0, 0, 0, 0, 0, 0, 0, 0, 0};
    coeffs.*probe.coeff = Ratio{3, 4};
    auto report = tally(stats, coeffs, {});
    CHECK(report.total() == Ratio{21, 4});
  }
}

TEST_CASE("exact defaults: a known event mix") {
  noc::SimStats stats;
  stats.totals.buffer_write = 10;       // 10
  stats.totals.crossbar_traversal = 4;  // 6
  stats.totals.arbitration = 5;         // 1
  stats.totals.ina_add = 5;             // 4
  auto report = tally(stats, EnergyCoefficients{}, {});
  CHECK(report.total() == 21);
  CHECK(to_double(report.total()) == 21.0);
  CHECK(to_string(Ratio{3, 2}) == "3/2");
  CHECK(to_string(Ratio{4}) == "4/1");
}

TEST_CASE("energy is linear in the coefficients") {
  auto stats = random_stats(5);
  EnergyCoefficients coeffs;
  auto base = tally(stats, coeffs, {}).total();
  EnergyCoefficients scaled;
  Ratio c{7, 3};
  scaled.buffer_write = coeffs.buffer_write * c;
  scaled.buffer_read = coeffs.buffer_read * c;
  scaled.crossbar_traversal = coeffs.crossbar_traversal * c;
  scaled.arbitration = coeffs.arbitration * c;
  scaled.link_traversal = coeffs.link_traversal * c;
  scaled.ni_inject = coeffs.ni_inject * c;
  scaled.ni_eject = coeffs.ni_eject * c;
  scaled.ina_add = coeffs.ina_add * c;
  scaled.operand_latch = coeffs.operand_latch * c;
  CHECK(tally(stats, scaled, {}).total() == base * c);
}

TEST_CASE("energy is additive over event streams") {
  auto a = random_stats(1);
  auto b = random_stats(2);
  noc::SimStats sum = a;
  sum.totals += b.totals;
  EnergyCoefficients coeffs;
  CHECK(tally(sum, coeffs, {}).total() ==
        tally(a, coeffs, {}).total() + tally(b, coeffs, {}).total());
}

TEST_CASE("improvement ratios") {
  CHECK(improvement(Ratio{100}, Ratio{100}) == 1);
  CHECK(improvement(Ratio{200}, Ratio{100}) == 2);
  CHECK(improvement(Ratio{3, 2}, Ratio{3}) == Ratio{1, 2});
  CHECK_THROWS(improvement(Ratio{1}, Ratio{0}));
}

TEST_CASE("cross-run comparison demands matching measurements") {
  auto stats = random_stats(8);
  EnergyCoefficients coeffs;
  auto base = tally(stats, coeffs, {"CONV2", 8, 2, "ws_plain", 1});
  auto variant = tally(stats, coeffs, {"CONV2", 8, 2, "ws_ina", 1});
  CHECK(energy_improvement(base, variant) == 1);  // same events, same energy
  auto wrong_layer = tally(stats, coeffs, {"CONV3", 8, 2, "ws_ina", 1});
  CHECK_THROWS_AS(energy_improvement(base, wrong_layer), MetadataMismatch);
  auto wrong_e = tally(stats, coeffs, {"CONV2", 8, 4, "ws_ina", 1});
  CHECK_THROWS_AS(energy_improvement(base, wrong_e), MetadataMismatch);
  auto wrong_seed = tally(stats, coeffs, {"CONV2", 8, 2, "ws_ina", 2});
  CHECK_THROWS_AS(energy_improvement(base, wrong_seed), MetadataMismatch);
}

TEST_CASE("coefficient validation") {
  EnergyCoefficients ok;
  ok.validate(true);
  ok.validate(false);
  EnergyCoefficients negative;
  negative.link_traversal = Ratio{-1};
  CHECK_THROWS_AS(negative.validate(false), ConfigError);
  EnergyCoefficients free_adder;
  free_adder.ina_add = 0;
  free_adder.validate(false);  // fine without accumulating routers
  CHECK_THROWS_AS(free_adder.validate(true), ConfigError);
}

TEST_CASE("report breakdown sums to the total") {
  auto stats = random_stats(3);
  auto report = tally(stats, EnergyCoefficients{}, {});
  Ratio sum = report.buffer_write + report.buffer_read +
              report.crossbar_traversal + report.arbitration +
              report.link_traversal + report.ni_inject + report.ni_eject +
              report.ina_add + report.operand_latch;
  CHECK(sum == report.total());
  CHECK(report.to_string().find("ina_add=") != std::string::npos);
  CHECK(report.to_string().find("total=") != std::string::npos);
}
