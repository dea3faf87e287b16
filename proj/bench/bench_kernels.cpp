#include <benchmark/benchmark.h>

#include "ffmu/summatory.hpp"

using namespace ffmu;

namespace {

const PrimeTable& table2() {
  static const PrimeTable t(Field::get(2), 16);
  return t;
}

RunOptions options(Execution mode) {
  RunOptions o;
  o.mode = mode;
  return o;
}

void BM_EnumeratePrimes(benchmark::State& state, Execution mode) {
  const Field& f = Field::get(2);
  const auto d = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_primes(f, d, mode));
}

void BM_MuOmegaLayer(benchmark::State& state, Execution mode) {
  const auto& t = table2();
  const auto all = PrimeSubset::parse("all", t.field());
  const auto x = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        partial_sum(SeriesWeight::kMuOmega, Restriction::d_s(), all, t, x, options(mode)));
  }
}

void BM_QSums(benchmark::State& state, Execution mode) {
  const auto& t = table2();
  const auto ap = PrimeSubset::parse("ap:111:1", t.field());
  const auto n = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(q_sums(t, ap, n, 2, options(mode)));
}

}  // namespace

BENCHMARK_CAPTURE(BM_EnumeratePrimes, serial, Execution::kSerial)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EnumeratePrimes, parallel, Execution::kParallel)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MuOmegaLayer, serial, Execution::kSerial)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_MuOmegaLayer, parallel, Execution::kParallel)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_QSums, serial, Execution::kSerial)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_QSums, parallel, Execution::kParallel)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
