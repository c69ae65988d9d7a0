// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <map>
#include <numbers>

#include "tubelab/generators.hpp"
#include "tubelab/kernels.hpp"
#include "tubelab/projections.hpp"

namespace {

using namespace tubelab;

const PointSet& cloud(int k) {
  static std::map<int, PointSet> cache;
  auto it = cache.find(k);
  if (it == cache.end()) it = cache.emplace(k, cantor_grid(k, 0.5)).first;
  return it->second;
}

template <bool Parallel>
void BM_BallCounts(benchmark::State& st) {
  const auto& P = cloud(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    auto r = Parallel ? kernels::parallel::ball_counts(P.grid(), P.scale().k, P.scale().k)
                      : kernels::serial::ball_counts(P.grid(), P.scale().k, P.scale().k);
    benchmark::DoNotOptimize(r.data());
  }
  st.SetItemsProcessed(st.iterations() * P.size());
}

template <bool Parallel>
void BM_ProjectionCounts(benchmark::State& st) {
  const auto& P = cloud(static_cast<int>(st.range(0)));
  const auto net = uniform_net(P.scale());
  for (auto _ : st) {
    auto r = Parallel ? kernels::parallel::projection_counts(P.grid(), P.scale().k, net.angles, P.scale().k)
                      : kernels::serial::projection_counts(P.grid(), P.scale().k, net.angles, P.scale().k);
    benchmark::DoNotOptimize(r.data());
  }
}

template <bool Parallel>
void BM_PairIntersections(benchmark::State& st) {
  const auto cfg = furstenberg_product(static_cast<int>(st.range(0)), 0.5, 1);
  std::vector<std::vector<std::uint64_t>> fams;
  for (const auto& f : cfg.families) fams.push_back(f.keys());
  for (auto _ : st) {
    auto r = Parallel ? kernels::parallel::pair_intersections(fams) : kernels::serial::pair_intersections(fams);
    benchmark::DoNotOptimize(r.data());
  }
}

template <bool Parallel>
void BM_ProjectionEnergy(benchmark::State& st) {
  const auto& P = cloud(static_cast<int>(st.range(0)));
  const auto net = net_from_values(cantor_line(P.scale().k, 0.5), std::numbers::pi);
  for (auto _ : st) {
    auto r = Parallel ? kernels::parallel::projection_energy(P.grid(), P.scale().k, net.angles, 0.5)
                      : kernels::serial::projection_energy(P.grid(), P.scale().k, net.angles, 0.5);
    benchmark::DoNotOptimize(r.data());
  }
}

}  // namespace

BENCHMARK(BM_BallCounts<false>)->Arg(8)->Arg(10);
BENCHMARK(BM_BallCounts<true>)->Arg(8)->Arg(10);
BENCHMARK(BM_ProjectionCounts<false>)->Arg(8)->Arg(10);
BENCHMARK(BM_ProjectionCounts<true>)->Arg(8)->Arg(10);
BENCHMARK(BM_PairIntersections<false>)->Arg(8)->Arg(10);
BENCHMARK(BM_PairIntersections<true>)->Arg(8)->Arg(10);
BENCHMARK(BM_ProjectionEnergy<false>)->Arg(8);
BENCHMARK(BM_ProjectionEnergy<true>)->Arg(8);

BENCHMARK_MAIN();
