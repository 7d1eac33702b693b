#include <benchmark/benchmark.h>

#include <random>

#include "inasim/harness/runner.hpp"

using namespace ina;

static std::vector<noc::Packet> random_trace(int count) {
  std::mt19937_64 rng(1);
  std::vector<noc::Packet> trace;
  for (int i = 0; i < count; ++i) {
    noc::Packet pkt;
    pkt.klass = noc::PacketClass::Unicast;
    pkt.src = {static_cast<int>(rng() % 8), static_cast<int>(rng() % 8)};
    pkt.dst = {static_cast<int>(rng() % 8), static_cast<int>(rng() % 8)};
    pkt.flit_count = 1 + static_cast<long long>(rng() % 5);
    pkt.present_cycle = static_cast<long long>(rng() % 256);
    trace.push_back(pkt);
  }
  return trace;
}

static void BM_random_unicast(benchmark::State& state) {
  auto trace = random_trace(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    noc::Network net{noc::MeshConfig{}};
    auto stats = run_until_drained(net, trace);
    benchmark::DoNotOptimize(stats.packets_delivered);
  }
}
BENCHMARK(BM_random_unicast)->Arg(64)->Arg(512);

static void BM_ws_round(benchmark::State& state) {
  LayerShape layer{"CONV5", 3, 256, 256, 13};
  auto sched = harness::make_schedule(
      layer, state.range(0) ? harness::Mode::WsIna : harness::Mode::WsPlain,
      {8, 1}, Precision{}, PeMemory{}, 4, 1);
  for (auto _ : state) {
    auto result = harness::run_schedule(sched, harness::RunOptions{});
    benchmark::DoNotOptimize(result.cycles);
  }
}
BENCHMARK(BM_ws_round)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
