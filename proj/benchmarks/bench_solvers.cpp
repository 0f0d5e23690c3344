#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "jang/barriers.hpp"
#include "jang/jang.hpp"

using namespace jang;

namespace {

WangDataSpec m_sigma_spec() {
  WangDataSpec s;
  s.m = SymTensorField::multiple_of_sigma(1.0);
  s.remainders.g_angular = 1.0;
  return s;
}

}  // namespace

static void BM_JangResidual(benchmark::State& state) {
  const InitialData h = make_hyperboloid_data();
  const RadialGrid g = RadialGrid::logarithmic(2.0, 1e3, static_cast<std::size_t>(state.range(0)));
  std::vector<double> f;
  for (double r : g.nodes()) f.push_back(std::sqrt(1.0 + r * r));
  for (auto _ : state) benchmark::DoNotOptimize(jang_residual(h, g, f, 0.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_JangResidual)->RangeMultiplier(4)->Range(100, 6400)->Complexity(benchmark::oN);

static void BM_BarrierIvp(benchmark::State& state) {
  BarrierODEParams p;
  p.alpha = 1.0;
  p.C.fill(0.01);
  p.C[6] = p.C[7] = 0.0;
  p.r0 = 1.0;
  const std::vector<double> nodes = RadialGrid::logarithmic(p.r0, 1e5, static_cast<std::size_t>(state.range(0))).nodes();
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_barrier_ivp(BarrierSide::upper, p, nodes));
    benchmark::DoNotOptimize(solve_barrier_ivp(BarrierSide::lower, p, nodes));
  }
}
BENCHMARK(BM_BarrierIvp)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

static void BM_AssembleBarriersFromData(benchmark::State& state) {
  const InitialData w = make_wang_data(m_sigma_spec());
  for (auto _ : state) {
    const BarrierODEParams p = constants_from_data(w, RadialGrid::logarithmic(1e2, 1e4, 60), 8);
    benchmark::DoNotOptimize(assemble_barriers(p, *w.spec(), {1e5, 800}));
  }
}
BENCHMARK(BM_AssembleBarriersFromData)->Unit(benchmark::kMillisecond);

static void BM_RegularizedSolve(benchmark::State& state) {
  const InitialData w = make_wang_data(m_sigma_spec());
  const BarrierODEParams p = constants_from_data(w, RadialGrid::logarithmic(1e2, 1e4, 60), 8);
  const BarrierSolution b = assemble_barriers(p, *w.spec(), {1e5, 800});
  const RadialGrid g = RadialGrid::logarithmic(b.params.r0, 700.0, static_cast<std::size_t>(state.range(0)));
  const auto ends = b.sample({g.back()});
  const double bv = 0.5 * (ends.phi_plus[0] + ends.phi_minus[0]);
  for (auto _ : state) benchmark::DoNotOptimize(solve_regularized_bvp({&w, g, 1e-14, bv}, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RegularizedSolve)->RangeMultiplier(2)->Range(200, 3200)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_GeometricLimit(benchmark::State& state) {
  const InitialData w = make_wang_data(m_sigma_spec());
  const BarrierODEParams p = constants_from_data(w, RadialGrid::logarithmic(1e2, 1e4, 60), 8);
  const BarrierSolution b = assemble_barriers(p, *w.spec(), {1e5, 800});
  const auto schedule = default_schedule(700.0, 1e-14, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(geometric_limit(w, b, schedule));
}
BENCHMARK(BM_GeometricLimit)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_AnsatzResidual(benchmark::State& state) {
  WangDataSpec s = m_sigma_spec();
  s.m.sigma.add(2, 0, 0.6);
  const InitialData w = make_wang_data(s);
  const HarmonicCoeffs psi = solve_psi(s);
  const double alpha = 2.0 * energy_wang(s);
  const ProfileFn phi = [alpha](double r) {
    const double q = std::sqrt(1.0 + r * r);
    return std::array<double, 4>{q + alpha * std::log(r), r / q + alpha / r, 1.0 / (q * q * q) - alpha / (r * r),
                                 -3.0 * r / std::pow(q, 5) + 2.0 * alpha / (r * r * r)};
  };
  const std::vector<double> radii = RadialGrid::logarithmic(1e2, 1e4, static_cast<std::size_t>(state.range(0))).nodes();
  const SphereGrid sphere(16);
  for (auto _ : state) benchmark::DoNotOptimize(jang_residual_ansatz(w, phi, psi, radii, sphere));
  state.counters["points"] = static_cast<double>(radii.size() * sphere.size());
}
BENCHMARK(BM_AnsatzResidual)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
