#include <benchmark/benchmark.h>

#include "lesionseg/gmm.hpp"
#include "lesionseg/kmeans.hpp"
#include "lesionseg/metrics.hpp"
#include "lesionseg/phantom.hpp"
#include "lesionseg/preprocess.hpp"
#include "lesionseg/watershed.hpp"

using namespace lesionseg;

namespace {

// Noisy single-disk phantom of side n.
Phantom noisy_phantom(int n) {
  PhantomSpec spec;
  spec.width = spec.height = n;
  spec.disks = {{n / 2.0, n / 2.0, n / 5.0}};
  spec.softness = 1.5;
  spec.noise_sigma = 0.1;
  spec.seed = 7;
  return generate_phantom(spec);
}

void BM_Kmeans(benchmark::State& state) {
  const GrayImage img = noisy_phantom(static_cast<int>(state.range(0))).image;
  for (auto _ : state) benchmark::DoNotOptimize(kmeans_cluster(img, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_Kmeans)->Arg(64)->Arg(128)->Arg(256);

void BM_Gmm(benchmark::State& state) {
  const GrayImage img = noisy_phantom(static_cast<int>(state.range(0))).image;
  for (auto _ : state) benchmark::DoNotOptimize(gmm_segment(img, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_Gmm)->Arg(64)->Arg(128)->Arg(256);

void BM_Watershed(benchmark::State& state) {
  const GrayImage img = noisy_phantom(static_cast<int>(state.range(0))).image;
  for (auto _ : state) benchmark::DoNotOptimize(mcwt_segment(img));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_Watershed)->Arg(64)->Arg(128)->Arg(256);

void BM_Clahe(benchmark::State& state) {
  const GrayImage img = noisy_phantom(static_cast<int>(state.range(0))).image;
  for (auto _ : state) benchmark::DoNotOptimize(clahe(img, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}
BENCHMARK(BM_Clahe)->Arg(64)->Arg(128)->Arg(256);

void BM_Hausdorff(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BinaryMask a = noisy_phantom(n).truth;
  const BinaryMask b = rasterize_disks(n, n, {{n / 2.0 + 2, n / 2.0 - 1, n / 5.0 + 1}});
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff(a, b));
}
BENCHMARK(BM_Hausdorff)->Arg(64)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
