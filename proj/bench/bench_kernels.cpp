// Parallel kernels against their serial references.
#include <benchmark/benchmark.h>

#include <random>

#include "ctxcohom/cech.hpp"
#include "ctxcohom/corpus.hpp"
#include "ctxcohom/obstruction.hpp"

using namespace ctxcohom;

namespace {

const char* kModels[] = {"hardy", "prbox", "sc-not-clc-224", "ks-7"};

IntMatrix random_matrix(std::size_t rows, std::size_t cols) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> dist(-5, 5);
  IntMatrix a(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) a(r, c) = dist(rng);
  return a;
}

template <bool Parallel>
void BM_Coboundary(benchmark::State& state) {
  auto m = corpus_model(kModels[state.range(0)]);
  auto f = free_presheaf(m);
  Nerve n(m.scenario(), 3);
  for (auto _ : state) {
    for (std::size_t q = 0; q < 3; ++q)
      benchmark::DoNotOptimize(Parallel ? coboundary(*f, n, q) : serial::coboundary(*f, n, q));
  }
  state.SetLabel(kModels[state.range(0)]);
}

template <bool Parallel>
void BM_Echelon(benchmark::State& state) {
  auto a = random_matrix(state.range(0), state.range(0) * 3 / 4);
  for (auto _ : state) {
    if (Parallel) {
      zlinalg::ColumnEchelon e(a, true);
      benchmark::DoNotOptimize(e.reduced());
    } else {
      benchmark::DoNotOptimize(zlinalg::serial::column_echelon(a).reduced());
    }
  }
}

template <bool Parallel>
void BM_Classify(benchmark::State& state) {
  auto m = corpus_model(kModels[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(Parallel ? classify(m, 1).csc : serial::classify(m, 1).csc);
  state.SetLabel(kModels[state.range(0)]);
}

}  // namespace

BENCHMARK(BM_Coboundary<true>)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Coboundary<false>)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Echelon<true>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Echelon<false>)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Classify<true>)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Classify<false>)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
