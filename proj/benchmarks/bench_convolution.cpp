#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "frontlab/convolution.hpp"
#include "frontlab/kernel.hpp"

using namespace frontlab;

namespace {

std::vector<double> tanh_profile(int n, double dx) {
  std::vector<double> u(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = 0.5 * (1.0 - std::tanh((i - n / 2) * dx));
  return u;
}

// args: n, kernel scale in units of 0.1 cells
void run(benchmark::State& state, ConvolutionPath path) {
  const int n = static_cast<int>(state.range(0));
  const double scale = 0.1 * static_cast<double>(state.range(1));
  const double dx = 0.1;
  const Kernel k = make_kernel(KernelFamily::gaussian, scale, dx, 1e-12);
  Convolver conv(k, n, path);
  const std::vector<double> u = tanh_profile(n, dx);
  std::vector<double> out(u.size());
  for (auto _ : state) {
    conv.apply(u, Closure::front(), out);
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["M"] = k.half_width;
  state.SetItemsProcessed(state.iterations() * n);
}

void BM_ConvolveDirect(benchmark::State& s) { run(s, ConvolutionPath::direct); }
void BM_ConvolveFft(benchmark::State& s) { run(s, ConvolutionPath::fft); }

}  // namespace

BENCHMARK(BM_ConvolveDirect)->ArgsProduct({{512, 1024, 4096}, {10, 20, 80}});
BENCHMARK(BM_ConvolveFft)->ArgsProduct({{512, 1024, 4096}, {10, 20, 80}});
