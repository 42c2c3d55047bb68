#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "pedrisk/kmeans.hpp"
#include "pedrisk/kpca.hpp"
#include "pedrisk/rng.hpp"

using namespace pedrisk;

namespace {

Eigen::MatrixXd blob_points(int per_cluster, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd centers(4, 5);
  centers << 18, 4, -1, 1, 9.5, 4, 0.5, -0.5, -1, 8, 5, 1.5, -5.5, -1.2, 1.2,
      16, -5, -4, 1.4, 2.8;
  Eigen::MatrixXd pts(4 * per_cluster, 5);
  for (int c = 0; c < 4; ++c) {
    for (int i = 0; i < per_cluster; ++i) {
      for (int d = 0; d < 5; ++d) {
        pts(c * per_cluster + i, d) = centers(c, d) + 0.6 * rng.normal();
      }
    }
  }
  return pts;
}

}  // namespace

static void BM_KMeans(benchmark::State& state) {
  auto pts = blob_points(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kmeans(pts, 4, 10, 7));
  }
}
BENCHMARK(BM_KMeans)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_KpcaFit(benchmark::State& state) {
  auto pts = blob_points(static_cast<int>(state.range(0)), 5);
  auto kernel = KernelSpec::gaussian(default_gamma(pts));
  for (auto _ : state) {
    benchmark::DoNotOptimize(kpca_fit_auto(pts, kernel, 0.95, 2));
  }
}
BENCHMARK(BM_KpcaFit)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

static void BM_KpcaProject(benchmark::State& state) {
  auto pts = blob_points(static_cast<int>(state.range(0)), 5);
  auto kernel = KernelSpec::gaussian(default_gamma(pts));
  auto model = kpca_fit_auto(pts, kernel, 0.95, 2);
  Eigen::VectorXd probe = pts.row(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.project(probe));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KpcaProject)->Arg(50)->Arg(150);

BENCHMARK_MAIN();
