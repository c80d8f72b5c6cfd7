// Serial reference loops vs the OpenMP kernels on a 2D momentum grid.
#include <benchmark/benchmark.h>

#include <random>

#include "qwalk/kernels.hpp"
#include "qwalk/seed.hpp"

using namespace qw;

namespace {

MomentumGrid grid(int n) { return build_momentum_grid(LatticeSpec::torus(n, n)); }

std::vector<Vec2> field(int n) {
  std::mt19937_64 rng(kPropertySeed);
  std::normal_distribution<double> g;
  std::vector<Vec2> v(n);
  for (auto& x : v) x = Vec2(cplx(g(rng), g(rng)), cplx(g(rng), g(rng)));
  return v;
}

template <bool Par>
void BM_Unitaries(benchmark::State& st) {
  const auto g = grid(static_cast<int>(st.range(0)));
  const auto p = preset("u2d");
  for (auto _ : st)
    benchmark::DoNotOptimize(Par ? kernels::unitaries(p, g) : serial::unitaries(p, g));
  st.SetItemsProcessed(st.iterations() * g.total);
}

template <bool Par>
void BM_BandPoints(benchmark::State& st) {
  const auto g = grid(static_cast<int>(st.range(0)));
  const auto p = preset("u2d");
  for (auto _ : st)
    benchmark::DoNotOptimize(Par ? kernels::band_points(p, g) : serial::band_points(p, g));
  st.SetItemsProcessed(st.iterations() * g.total);
}

template <bool Par>
void BM_Apply(benchmark::State& st) {
  const auto g = grid(static_cast<int>(st.range(0)));
  const auto u = serial::unitaries(preset("u2d"), g);
  auto c = field(g.total);
  for (auto _ : st) {
    if (Par) kernels::apply(u, c, 10);
    else serial::apply(u, c, 10);
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * g.total * 10);
}

template <bool Par>
void BM_SolveMasks(benchmark::State& st) {
  const auto g = grid(static_cast<int>(st.range(0)));
  const auto u = serial::unitaries(preset("u2d"), g);
  for (auto _ : st)
    benchmark::DoNotOptimize(Par ? kernels::solve_grid(u) : serial::solve_grid(u));
  st.SetItemsProcessed(st.iterations() * g.total);
}

}  // namespace

BENCHMARK(BM_Unitaries<false>)->Arg(64)->Arg(256);
BENCHMARK(BM_Unitaries<true>)->Arg(64)->Arg(256);
BENCHMARK(BM_BandPoints<false>)->Arg(64)->Arg(256);
BENCHMARK(BM_BandPoints<true>)->Arg(64)->Arg(256);
BENCHMARK(BM_Apply<false>)->Arg(64)->Arg(256);
BENCHMARK(BM_Apply<true>)->Arg(64)->Arg(256);
BENCHMARK(BM_SolveMasks<false>)->Arg(64)->Arg(128);
BENCHMARK(BM_SolveMasks<true>)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
