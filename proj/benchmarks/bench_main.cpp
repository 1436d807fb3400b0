#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ftsim/event_queue.hpp"
#include "ftsim/islip.hpp"
#include "ftsim/route_sets.hpp"
#include "ftsim/simulator.hpp"
#include "specs.hpp"

namespace {

using namespace ftsim;

void BM_IslipArbitrate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::vector<std::vector<std::uint64_t>> matrices(256, std::vector<std::uint64_t>(static_cast<std::size_t>(n)));
  const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  for (auto& m : matrices) {
    for (auto& r : m) r = rng() & rng() & mask;
  }
  switching::IslipPointers ptr(n);
  std::size_t i = 0;
  for (auto _ : state) {
    auto m = switching::islip_arbitrate(matrices[i++ % matrices.size()], ptr, 1);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_IslipArbitrate)->Arg(8)->Arg(16)->Arg(36);

// Steady push/pop with a mix of monotone lanes and out-of-order events.
void BM_EventQueue(benchmark::State& state) {
  engine::EventQueue q;
  std::mt19937_64 rng(2);
  for (int i = 0; i < 4096; ++i) q.push(static_cast<TimeNs>(rng() % 10000), engine::EventKind::injection);
  for (auto _ : state) {
    const engine::Event e = q.pop();
    q.push(e.time + 326, engine::EventKind::link_arrival);
    benchmark::DoNotOptimize(e);
  }
}
BENCHMARK(BM_EventQueue);

void BM_CheckTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(route_sets::check_table(4, 3, 2));
}
BENCHMARK(BM_CheckTable)->Unit(benchmark::kMillisecond);

// Simulated time per wall-clock second at desk scale under saturation.
void BM_DeskRun(benchmark::State& state) {
  specs::Desk d;
  d.routing = "ADAP-2TH-AS-Kd2";
  d.scheme = "vftree";
  d.vcs = 3;
  d.scenario = "HS25-4";
  d.duration_ns = 500'000;
  d.warmup_ns = 100'000;
  const engine::RunSpec spec = specs::make(d);
  std::int64_t packets = 0;
  for (auto _ : state) packets += engine::run(spec).delivered_packets;
  state.counters["packets/s"] = benchmark::Counter(static_cast<double>(packets), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_DeskRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
