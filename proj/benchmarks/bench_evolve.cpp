#include <benchmark/benchmark.h>

#include "frontlab/evolve.hpp"
#include "frontlab/kernel.hpp"
#include "frontlab/media.hpp"

using namespace frontlab;

namespace {

void BM_Step(benchmark::State& state, Scheme scheme) {
  const int n = static_cast<int>(state.range(0));
  const Grid1D grid = Grid1D::centered(0.1, n);
  const Nonlinearity nl = Nonlinearity::cubic(TimeSignal::periodic(0.25, 0.05, 2.0));
  const Kernel k = make_kernel(KernelFamily::gaussian, 1.0, 0.1, 1e-12);
  SolverConfig cfg;
  cfg.scheme = scheme;
  cfg.dt = scheme == Scheme::rk4 ? 0.1 : 0.9 * monotone_dt_limit(nl, 0.0, 0.1);
  cfg.recenter = false;
  Evolver ev(nl, k, cfg, grid);
  FieldState u = FieldState::zeros(grid);
  for (int i = 0; i < n / 2; ++i) u[i] = 1.0;
  for (auto _ : state) {
    ev.step(u);
    benchmark::DoNotOptimize(u.values.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_StepEuler(benchmark::State& s) { BM_Step(s, Scheme::euler_monotone); }
void BM_StepRk4(benchmark::State& s) { BM_Step(s, Scheme::rk4); }

}  // namespace

BENCHMARK(BM_StepEuler)->Arg(1024)->Arg(4096);
BENCHMARK(BM_StepRk4)->Arg(1024)->Arg(4096);
