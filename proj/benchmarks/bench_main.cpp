#include <benchmark/benchmark.h>

#include <numeric>

#include "sampdisc/discretize.hpp"
#include "sampdisc/halving_select.hpp"
#include "sampdisc/partition_oracle.hpp"
#include "sampdisc/systems_io.hpp"

using namespace sampdisc;

namespace {

SampledSystem dft(std::size_t n, std::size_t m) {
  return make_system({SystemKind::dft, n, m, 0, Field::complex, {}});
}

void BM_FrameBounds(benchmark::State& state) {
  const FrameSystem frame = build_frame_from_samples(dft(8, static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(frame_bounds(frame));
}
BENCHMARK(BM_FrameBounds)->Arg(256)->Arg(4096);

void BM_RandomizedPartition(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  const FrameSystem frame = build_frame_from_samples(dft(2, m));
  IndexSet all(m);
  std::iota(all.begin(), all.end(), std::size_t{0});
  const double delta = 2.0 / static_cast<double>(m);
  const PartitionRequest req{all, delta, 1.0, 1.0};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_partition(frame, req, {Strategy::randomized, 10000, seed++}));
  }
}
BENCHMARK(BM_RandomizedPartition)->Arg(256)->Arg(1024);

void BM_HalvingDft(benchmark::State& state) {
  const std::size_t m = static_cast<std::size_t>(state.range(0));
  const FrameSystem frame = build_frame_from_samples(dft(2, m));
  for (auto _ : state) {
    benchmark::DoNotOptimize(halving_select(frame, 1.0, {Strategy::randomized, 10000, 1}));
  }
}
BENCHMARK(BM_HalvingDft)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Reorthonormalize(benchmark::State& state) {
  const SampledSystem s = make_system(
      {SystemKind::random_orthonormal, 8, static_cast<std::size_t>(state.range(0)), 3, Field::complex, {}});
  for (auto _ : state) benchmark::DoNotOptimize(reorthonormalize(s));
}
BENCHMARK(BM_Reorthonormalize)->Arg(128)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
