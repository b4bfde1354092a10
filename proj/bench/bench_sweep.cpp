// Serial reference against the OpenMP sweep on the preset device.
//
//   ./build/bench/bench_sweep --benchmark_filter=Sweep
//
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "eosim/engine.hpp"

namespace {

eosim::SweepGrid grid(int nwl) {
  eosim::SweepGrid g;
  for (int i = 0; i <= 22; ++i) g.voltages.push_back(-1.0 + 0.1 * i);
  for (int i = 0; i < nwl; ++i) g.wavelengths.push_back(895e-9 + 10e-9 * i / nwl);
  return g;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto circuit = eosim::paper_preset();
  const auto g = grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eosim::sweep_serial(circuit, g));
  state.SetItemsProcessed(state.iterations() * 23 * state.range(0));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto circuit = eosim::paper_preset();
  const auto g = grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eosim::sweep(circuit, g));
  state.SetItemsProcessed(state.iterations() * 23 * state.range(0));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
