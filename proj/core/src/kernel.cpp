#include "frontlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frontlab/error.hpp"

namespace frontlab {

const char* to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::uniform: return "uniform";
    case KernelFamily::laplace: return "laplace";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(const std::string& name) {
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "uniform") return KernelFamily::uniform;
  if (name == "laplace") return KernelFamily::laplace;
  fail(ErrorKind::invalid_argument, "unknown kernel family '" + name + "'");
}

double Kernel::mass() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s * dx;
}

double tail_mass(KernelFamily family, double scale, double r) {
  switch (family) {
    case KernelFamily::gaussian: return std::erfc(r / (scale * std::numbers::sqrt2));
    case KernelFamily::laplace: return std::exp(-r / scale);
    case KernelFamily::uniform: return r >= scale ? 0.0 : 1.0 - r / scale;
  }
  return 0.0;
}

namespace {

double density(KernelFamily family, double scale, double x) {
  switch (family) {
    case KernelFamily::gaussian:
      return std::exp(-0.5 * (x / scale) * (x / scale)) / (scale * std::sqrt(2.0 * std::numbers::pi));
    case KernelFamily::laplace: return std::exp(-std::abs(x) / scale) / (2.0 * scale);
    case KernelFamily::uniform: return std::abs(x) <= scale * (1.0 + 1e-12) ? 0.5 / scale : 0.0;
  }
  return 0.0;
}

void normalize(Kernel& k) {
  // sum from the tails inward so the mass is insensitive to summation order
  double s = 0.0;
  for (int m = k.half_width; m >= 1; --m) s += 2.0 * k.weight(m);
  s += k.weight(0);
  const double factor = 1.0 / (s * k.dx);
  for (double& w : k.weights) w *= factor;
}

}  // namespace

Kernel make_kernel(KernelFamily family, double scale, double dx, double trunc_tol) {
  if (!(scale > 0.0) || !(dx > 0.0) || !(trunc_tol > 0.0))
    fail(ErrorKind::invalid_argument, "kernel scale, dx and trunc_tol must be positive");
  if (!(trunc_tol < 1e-3)) fail(ErrorKind::invalid_argument, "kernel trunc_tol must be below 1e-3");
  if (scale < 0.5 * dx)
    fail(ErrorKind::resolution, "kernel scale " + std::to_string(scale) + " is narrower than half a cell (dx=" +
                                    std::to_string(dx) + ")");

  int M = 0;
  if (family == KernelFamily::uniform) {
    M = static_cast<int>(std::floor(scale / dx * (1.0 + 1e-12)));
  } else {
    while (tail_mass(family, scale, M * dx) >= trunc_tol) {
      ++M;
      if (M > kDefaultHalfWidthCap) fail(ErrorKind::resource, "kernel half width exceeds cap");
    }
  }

  Kernel k;
  k.dx = dx;
  k.half_width = M;
  k.family = family;
  k.scale = scale;
  k.weights.assign(static_cast<std::size_t>(2 * M + 1), 0.0);
  for (int m = 0; m <= M; ++m) {
    const double w = density(family, scale, m * dx);
    k.weights[static_cast<std::size_t>(M + m)] = w;
    k.weights[static_cast<std::size_t>(M - m)] = w;
  }
  normalize(k);
  return k;
}

Kernel iterate_kernel(const Kernel& kernel, int N, int half_width_cap) {
  if (N < 1) fail(ErrorKind::invalid_argument, "iterate_kernel needs N >= 1");
  const long long wide = static_cast<long long>(N) * kernel.half_width;
  if (wide > half_width_cap)
    fail(ErrorKind::resource, "iterated half width " + std::to_string(wide) + " exceeds cap " +
                                  std::to_string(half_width_cap));
  Kernel acc = kernel;
  for (int step = 1; step < N; ++step) {
    const int Ma = acc.half_width;
    const int Mb = kernel.half_width;
    const int Mc = Ma + Mb;
    std::vector<double> out(static_cast<std::size_t>(2 * Mc + 1), 0.0);
    for (int m = 0; m <= Mc; ++m) {
      double s = 0.0;
      const int lo = std::max(-Mb, m - Ma);
      const int hi = std::min(Mb, m + Ma);
      for (int j = lo; j <= hi; ++j) s += kernel.weight(j) * acc.weight(m - j);
      s *= kernel.dx;
      out[static_cast<std::size_t>(Mc + m)] = s;
      out[static_cast<std::size_t>(Mc - m)] = s;
    }
    acc.weights = std::move(out);
    acc.half_width = Mc;
  }
  acc.power = kernel.power * N;
  return acc;
}

KernelReport validate_kernel(const Kernel& kernel) {
  KernelReport r;
  r.mass_error = std::abs(kernel.mass() - 1.0);
  r.min_weight = *std::min_element(kernel.weights.begin(), kernel.weights.end());
  for (int m = 1; m <= kernel.half_width; ++m)
    r.symmetry_error = std::max(r.symmetry_error, std::abs(kernel.weight(m) - kernel.weight(-m)));
  if (kernel.family == KernelFamily::uniform) {
    r.differentiable = false;
    r.note = "uniform kernel is discontinuous at +-scale; kept as a stress case";
  } else if (kernel.family == KernelFamily::laplace) {
    r.differentiable = false;
    r.note = "laplace kernel has a corner at 0; kept as a stress case";
  }
  return r;
}

}  // namespace frontlab
