#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "jang/conformal.hpp"
#include "jang/graph.hpp"
#include "jang/harmonics.hpp"
#include "jang/initial_data.hpp"

using namespace jang;

static void BM_HarmonicRoundTrip(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const SphereGrid sphere(L);
  HarmonicCoeffs c(L);
  for (int l = 0; l <= L; ++l)
    for (int m = -l; m <= l; ++m) c.set(l, m, 1.0 / (1.0 + l + std::abs(m)));
  for (auto _ : state) benchmark::DoNotOptimize(HarmonicCoeffs::analyze(sphere, c.synthesize(sphere), L));
}
BENCHMARK(BM_HarmonicRoundTrip)->Arg(8)->Arg(16)->Arg(32);

static void BM_RadialJangGraph(benchmark::State& state) {
  const InitialData d = make_areal_mass_data(0.5);
  const RadialGrid g = RadialGrid::logarithmic(1e-2, 2e4, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(radial_jang_graph(d, g.nodes(), g.front()));
}
BENCHMARK(BM_RadialJangGraph)->Arg(401)->Arg(1601)->Unit(benchmark::kMillisecond);

static void BM_ScalarCurvatureRoutes(benchmark::State& state) {
  const InitialData d = make_areal_mass_data(0.5);
  const RadialGrid g = RadialGrid::logarithmic(1e-2, 2e4, 801);
  const GraphMetric m(d, graph_from_radial(radial_jang_graph(d, g.nodes(), g.front())));
  const double h = std::log(g[1] / g[0]);
  std::size_t i = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scalar_curvature_sy(m, i, 1.1, 0.3, h));
    benchmark::DoNotOptimize(scalar_curvature_direct(m, i, 1.1, 0.3, h));
    i = i + 7 < g.size() - 1 ? i + 7 : 1;
  }
}
BENCHMARK(BM_ScalarCurvatureRoutes);

static void BM_AdmMass(benchmark::State& state) {
  std::vector<double> radii;
  for (double R = 1e3; R <= 1.6e5; R *= 1.5) radii.push_back(R);
  const MetricField g = schwarzschild_metric(0.7);
  for (auto _ : state) benchmark::DoNotOptimize(adm_mass(g, radii, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_AdmMass)->Arg(8)->Arg(16);

static void BM_ConformalChain(benchmark::State& state) {
  const InitialData d = make_areal_mass_data(0.5);
  const RadialGrid g = RadialGrid::logarithmic(1e-2, 2e4, static_cast<std::size_t>(state.range(0)));
  const GraphMetric m(d, graph_from_radial(radial_jang_graph(d, g.nodes(), g.front())));
  for (auto _ : state) {
    const ConformalSolve sol = solve_conformal_factor(m, scalar_curvature_profile(m), g.back());
    benchmark::DoNotOptimize(conformal_mass(m, sol, g.back() / 100.0, g.back() / 2.0));
  }
}
BENCHMARK(BM_ConformalChain)->Arg(801)->Arg(1601)->Unit(benchmark::kMillisecond);
