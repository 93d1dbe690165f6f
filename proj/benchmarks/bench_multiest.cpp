#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "multiest/grid.hpp"
#include "multiest/operators.hpp"
#include "multiest/size_energy.hpp"
#include "multiest/tiles.hpp"

using namespace multiest;

namespace {

std::vector<GridFunction> band_inputs(int n, std::size_t N, long band, double L) {
  std::vector<GridFunction> fs;
  for (int j = 0; j < n; ++j) {
    fs.push_back(from_preset(Preset::random_bandlimited(band, 100 + static_cast<std::uint64_t>(j)), N, L));
  }
  return fs;
}

CoeffSequence random_coeffs(const TileCollection& coll, int slot, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  CoeffSequence seq;
  seq.slot = slot;
  for (std::size_t i = 0; i < coll.tiles.size(); ++i) seq.values.emplace_back(g(rng), g(rng));
  return seq;
}

}  // namespace

static void BM_dft(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  auto f = from_preset(Preset::random_bandlimited(static_cast<long>(N / 4), 1), N, 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(dft(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_dft)->RangeMultiplier(4)->Range(256, 16384)->Complexity();

static void BM_simplex_apply_dense(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  auto fs = band_inputs(2, N, static_cast<long>(N / 2 - 1), 8.0);
  auto spec = SimplexOpSpec::simplex(2);
  for (auto _ : state) benchmark::DoNotOptimize(simplex_apply(spec, fs));
}
BENCHMARK(BM_simplex_apply_dense)->Arg(256)->Arg(512)->Arg(1024);

static void BM_simplex_apply_sparse(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  auto fs = band_inputs(2, N, 16, 8.0);
  auto spec = SimplexOpSpec::simplex(2);
  for (auto _ : state) benchmark::DoNotOptimize(simplex_apply(spec, fs));
}
BENCHMARK(BM_simplex_apply_sparse)->Arg(1024)->Arg(4096)->Arg(16384);

static void BM_maximal_apply(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  auto fs = band_inputs(2, N, 16, 8.0);
  auto spec = SimplexOpSpec::simplex(2);
  spec.maximal = true;
  for (auto _ : state) benchmark::DoNotOptimize(maximal_apply(spec, fs));
}
BENCHMARK(BM_maximal_apply)->Arg(1024)->Arg(4096);

static void BM_bht_kernel(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  auto fs = band_inputs(2, N, static_cast<long>(N / 8), 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(bht_kernel(fs[0], fs[1]));
}
BENCHMARK(BM_bht_kernel)->Arg(512)->Arg(1024)->Arg(2048);

static void BM_t3_frequency_reference(benchmark::State& state) {
  const auto N = static_cast<std::size_t>(state.range(0));
  auto fs = band_inputs(3, N, static_cast<long>(N / 8), 8.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(t3_frequency_reference(fs[0], fs[1], fs[2], T3Variant::minus, 256));
  }
}
BENCHMARK(BM_t3_frequency_reference)->Arg(1024)->Arg(4096)->Arg(16384);

static void BM_size(benchmark::State& state) {
  auto coll = lacunary_collection({.d = 3, .levels = static_cast<int>(state.range(0)), .per_level = 4});
  auto seq = random_coeffs(coll, 0, 7);
  for (auto _ : state) benchmark::DoNotOptimize(size(coll, seq, 0));
}
BENCHMARK(BM_size)->Arg(3)->Arg(4)->Arg(5);

static void BM_energy(benchmark::State& state) {
  auto coll = lacunary_collection({.d = 3, .levels = static_cast<int>(state.range(0)), .per_level = 4});
  auto seq = random_coeffs(coll, 1, 7);
  for (auto _ : state) benchmark::DoNotOptimize(energy(coll, seq, 1));
}
BENCHMARK(BM_energy)->Arg(3)->Arg(4)->Arg(5);

static void BM_stratify(benchmark::State& state) {
  auto coll = lacunary_collection({.d = 3, .levels = 4, .per_level = 4});
  auto seq = random_coeffs(coll, 0, 7);
  for (auto _ : state) benchmark::DoNotOptimize(stratify(coll, seq, 0));
}
BENCHMARK(BM_stratify);

BENCHMARK_MAIN();
