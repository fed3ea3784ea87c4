#include <benchmark/benchmark.h>

#include <cmath>

#include "magnls/calculus.hpp"
#include "magnls/gauge.hpp"
#include "magnls/preconditioner.hpp"
#include "magnls/profiles.hpp"
#include "magnls/solver.hpp"

using namespace magnls;

namespace {

Grid grid_for(int dim, int n) { return Grid(dim, dim == 3 ? 6.0 : 8.0, n); }

ComplexField bump(const Grid& g) {
  return sample_complex(g, [&g](const double* x) {
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) r2 += x[a] * x[a];
    return std::exp(-0.5 * r2) * cplx(1.0, 0.2 * x[0]);
  });
}

void BM_Transport(benchmark::State& st) {
  Grid g = grid_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  auto A = parse_field("periodic:b=0.5,L=2", g.dim());
  for (auto _ : st) benchmark::DoNotOptimize(ParallelTransport(A, g));
  st.counters["nodes"] = static_cast<double>(g.size());
}

void BM_Energy(benchmark::State& st) {
  Grid g = grid_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  ParallelTransport T(parse_field(g.dim() == 1 ? "zero" : "landau:b=0.5", g.dim()), g);
  ComplexField u = bump(g);
  for (auto _ : st) benchmark::DoNotOptimize(energy_EA(u, T));
  st.SetItemsProcessed(static_cast<int64_t>(st.iterations() * g.size()));
}

void BM_Kinetic(benchmark::State& st) {
  Grid g = grid_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  ParallelTransport T(parse_field("landau:b=0.5", g.dim()), g);
  ComplexField u = bump(g);
  for (auto _ : st) benchmark::DoNotOptimize(kinetic(u, T));
  st.SetItemsProcessed(static_cast<int64_t>(st.iterations() * g.size()));
}

void BM_Rephase(benchmark::State& st) {
  Grid g = grid_for(2, static_cast<int>(st.range(0)));
  auto A = parse_field("gauss:b0=1,s=1", 2);
  for (auto _ : st) benchmark::DoNotOptimize(rephase_field(A, {1.0, -0.5}, g));
}

void BM_Resolvent(benchmark::State& st) {
  Grid g = grid_for(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  FreeResolvent P(g, 1.0);
  ComplexField u = bump(g);
  for (auto _ : st) benchmark::DoNotOptimize(P.apply(u));
}

void BM_GroundState(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(radial_ground_state(static_cast<int>(st.range(0)), 4.0, 1.0));
}

void BM_LocalMass(benchmark::State& st) {
  Grid g = grid_for(2, static_cast<int>(st.range(0)));
  Discretization xi(g, 1.0, 1.0);
  ComplexField u = bump(g);
  for (auto _ : st) benchmark::DoNotOptimize(local_mass_sup(u, xi, 4.0));
}

}  // namespace

BENCHMARK(BM_Transport)->Args({2, 129})->Args({3, 49})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Energy)->Args({1, 401})->Args({2, 129})->Args({3, 65})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Kinetic)->Args({2, 129})->Args({3, 65})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Rephase)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Resolvent)->Args({2, 129})->Args({3, 65})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_GroundState)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LocalMass)->Arg(129)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
