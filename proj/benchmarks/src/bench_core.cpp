#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "sbss/covariance.hpp"
#include "sbss/geometry.hpp"
#include "sbss/guidance.hpp"
#include "sbss/joint_diagonalization.hpp"
#include "sbss/redcap.hpp"
#include "sbss/sbss.hpp"
#include "sbss/variogram.hpp"
#include "sbss/voronoi.hpp"

using namespace sbss;

namespace {

SpatialDataset dataset(std::size_t n, std::size_t p) {
  std::mt19937_64 rng(2024);
  return fixtures::random_dataset(rng, n, p);
}

void BM_NeighbourhoodMatrix(benchmark::State& state) {
  const auto ds = dataset(static_cast<std::size_t>(state.range(0)), 1);
  const DistanceMatrix d = pairwise_distances(ds);
  const auto members = fixtures::all_indices(ds.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(neighbourhood_matrix(d, members, KernelRing{0.0, 0.1}));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NeighbourhoodMatrix)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

void BM_LocalCovariance(benchmark::State& state) {
  const auto ds = dataset(static_cast<std::size_t>(state.range(0)), 18);
  const auto members = fixtures::all_indices(ds.size());
  const auto k = neighbourhood_matrix(ds.locations(), KernelRing{0.0, 0.1});
  for (auto _ : state) benchmark::DoNotOptimize(local_covariance(ds, members, k));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LocalCovariance)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

void BM_JointDiagonalization(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const auto p = state.range(0);
  std::vector<Eigen::MatrixXd> ms;
  for (int k = 0; k < 12; ++k) {
    const Eigen::MatrixXd a = fixtures::normal_matrix(rng, p, p);
    ms.push_back(a + a.transpose());
  }
  for (auto _ : state) benchmark::DoNotOptimize(joint_diagonalize(ms));
}
BENCHMARK(BM_JointDiagonalization)->Arg(4)->Arg(8)->Arg(18);

void BM_Voronoi(benchmark::State& state) {
  const auto ds = dataset(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(VoronoiDiagram(ds.locations()));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Voronoi)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

void BM_Redcap(benchmark::State& state) {
  const auto ds = dataset(static_cast<std::size_t>(state.range(0)), 18);
  const VoronoiDiagram v(ds.locations());
  for (auto _ : state) benchmark::DoNotOptimize(RegionTree(ds, v, 8));
}
BENCHMARK(BM_Redcap)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Sbss(benchmark::State& state) {
  const auto ds = dataset(static_cast<std::size_t>(state.range(0)), 18);
  ParameterSetting s;
  s.regionalization = grid_partition(ds, 3);
  s.kernel = {{{0.0, 0.05}, {0.05, 0.1}, {0.1, 0.2}}};
  for (auto _ : state) benchmark::DoNotOptimize(run_sbss(ds, s));
}
BENCHMARK(BM_Sbss)->Arg(1000)->Arg(2108)->Unit(benchmark::kMillisecond);

void BM_Variograms(benchmark::State& state) {
  const auto ds = dataset(static_cast<std::size_t>(state.range(0)), 18);
  for (auto _ : state) benchmark::DoNotOptimize(variograms(ds, 15, 0.7));
}
BENCHMARK(BM_Variograms)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Guidance(benchmark::State& state) {
  const auto ds = dataset(static_cast<std::size_t>(state.range(0)), 18);
  for (auto _ : state) benchmark::DoNotOptimize(compute_guidance(ds));
}
BENCHMARK(BM_Guidance)->Arg(500)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
