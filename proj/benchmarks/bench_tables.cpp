#include <benchmark/benchmark.h>

#include "kloosterlab/kloosterman.hpp"

using namespace kloosterlab;

static void BM_BuildTableNaive(benchmark::State& state) {
  PrimeModulus p(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    auto table = build_table(1, p, TableMethod::naive);
    benchmark::DoNotOptimize(table.values.data());
  }
}
BENCHMARK(BM_BuildTableNaive)->Arg(1009)->Arg(10007)->Unit(benchmark::kMillisecond);

static void BM_BuildTableDft(benchmark::State& state) {
  PrimeModulus p(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) {
    auto table = build_table(1, p, TableMethod::dft);
    benchmark::DoNotOptimize(table.values.data());
  }
}
BENCHMARK(BM_BuildTableDft)->Arg(1009)->Arg(10007)->Arg(100003)->Arg(1000003)->Unit(benchmark::kMillisecond);

static void BM_BuildAngles(benchmark::State& state) {
  PrimeModulus p(static_cast<std::uint64_t>(state.range(0)));
  auto table = build_table(1, p, TableMethod::dft);
  for (auto _ : state) {
    auto angles = build_angles(table, 1);
    benchmark::DoNotOptimize(angles.theta.data());
  }
}
BENCHMARK(BM_BuildAngles)->Arg(100003)->Unit(benchmark::kMillisecond);

static void BM_BatchInverse(benchmark::State& state) {
  const std::uint64_t p = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    auto inv = inverse_table(p);
    benchmark::DoNotOptimize(inv.data());
  }
}
BENCHMARK(BM_BatchInverse)->Arg(100003)->Arg(1000003)->Unit(benchmark::kMillisecond);
