#include <benchmark/benchmark.h>

#include "kloosterlab/statistics.hpp"

using namespace kloosterlab;

namespace {

const KloostermanTable& shared_table() {
  static KloostermanTable table = build_table(1, PrimeModulus(100003), TableMethod::dft);
  return table;
}

}  // namespace

static void BM_IntervalSumFullPeriod(benchmark::State& state) {
  const auto& table = shared_table();
  const auto k = static_cast<unsigned>(state.range(0));
  IntervalSpec iv{0, table.p.value()};
  for (auto _ : state) {
    auto r = interval_sum(table, 1, iv, k);
    benchmark::DoNotOptimize(r.value);
  }
}
BENCHMARK(BM_IntervalSumFullPeriod)->Arg(1)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_CdfDiscrepancy(benchmark::State& state) {
  const auto& table = shared_table();
  IntervalSpec iv{0, table.p.value() - 1};
  for (auto _ : state) {
    double d = empirical_cdf_discrepancy(table, 1, iv);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_CdfDiscrepancy)->Unit(benchmark::kMillisecond);

static void BM_WindowMoment(benchmark::State& state) {
  const auto& table = shared_table();
  WindowMomentSpec spec{static_cast<std::uint64_t>(state.range(0)), 2, 1, 1};
  for (auto _ : state) {
    double v = window_moment(table, spec);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_WindowMoment)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);
