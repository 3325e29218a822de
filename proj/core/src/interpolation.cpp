#include "frontlab/interpolation.hpp"

#include <cmath>

#include "frontlab/error.hpp"

namespace frontlab {

std::array<double, 6> lagrange6_weights(double r) {
  std::array<double, 6> w{};
  for (int j = 0; j < 6; ++j) {
    const double xj = j - 2;
    double p = 1.0;
    for (int k = 0; k < 6; ++k) {
      if (k == j) continue;
      const double xk = k - 2;
      p *= (r - xk) / (xj - xk);
    }
    w[static_cast<std::size_t>(j)] = p;
  }
  return w;
}

namespace {

inline double at(std::span<const double> v, long i, double left, double right) {
  if (i < 0) return left;
  if (i >= static_cast<long>(v.size())) return right;
  return v[static_cast<std::size_t>(i)];
}

inline void closure_values(const Closure& c, double& l, double& r) {
  l = c.kind == ClosureKind::zero ? 0.0 : c.left;
  r = c.kind == ClosureKind::zero ? 0.0 : c.right;
}

}  // namespace

double sample_at(std::span<const double> values, const Grid1D& grid, double x_window, const Closure& closure) {
  double l, r;
  closure_values(closure, l, r);
  const double s = (x_window - grid.x_left) / grid.dx;
  const double fl = std::floor(s);
  const long i0 = static_cast<long>(fl);
  const double frac = s - fl;
  if (frac == 0.0) return at(values, i0, l, r);
  const auto w = lagrange6_weights(frac);
  double acc = 0.0;
  for (int j = 0; j < 6; ++j) acc += w[static_cast<std::size_t>(j)] * at(values, i0 + j - 2, l, r);
  return acc;
}

std::vector<double> shifted(std::span<const double> values, double dx, double shift, const Closure& closure) {
  double l, r;
  closure_values(closure, l, r);
  const long n = static_cast<long>(values.size());
  std::vector<double> out(values.size());
  // u(x_i - shift) = u at fractional index i - s
  const double s = shift / dx;
  const double fl = std::floor(-s);
  const long base = static_cast<long>(fl);
  const double frac = -s - fl;
  if (std::abs(frac) < 1e-13 || std::abs(frac - 1.0) < 1e-13) {
    const long k = static_cast<long>(std::llround(-s));
    for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = at(values, i + k, l, r);
    return out;
  }
  const auto w = lagrange6_weights(frac);
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 6; ++j) acc += w[static_cast<std::size_t>(j)] * at(values, i + base + j - 2, l, r);
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

double refine_crossing(std::span<const double> values, const Grid1D& grid, double level, double x_guess,
                       const Closure& closure) {
  auto g = [&](double x) { return sample_at(values, grid, x, closure) - level; };
  double a = x_guess - grid.dx, b = x_guess + grid.dx;
  double ga = g(a), gb = g(b);
  if (ga * gb > 0.0) return x_guess;
  for (int it = 0; it < 80 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    const double gm = g(m);
    if (gm == 0.0) return m;
    if ((gm > 0.0) == (ga > 0.0)) {
      a = m;
      ga = gm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace frontlab
