#include "frontlab/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <sstream>

#include "frontlab/error.hpp"

namespace frontlab {

std::string to_string(const Closure& c) {
  std::ostringstream os;
  os.precision(17);
  switch (c.kind) {
    case ClosureKind::front: os << "front(" << c.left << "," << c.right << ")"; break;
    case ClosureKind::constant: os << "constant(" << c.left << "," << c.right << ")"; break;
    case ClosureKind::zero: os << "zero"; break;
  }
  return os.str();
}

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Convolver::Fft {
  int size = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  std::vector<std::complex<double>> kernel_spec;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (real) fftw_free(real);
    if (spec) fftw_free(spec);
  }
};

Convolver::Convolver(const Kernel& kernel, int n, ConvolutionPath path) : kernel_(kernel), n_(n) {
  if (n < 1) fail(ErrorKind::invalid_argument, "convolution window must be non-empty");
  const int M = kernel_.half_width;
  ext_.assign(static_cast<std::size_t>(n + 2 * M), 0.0);
  bool want_fft = path == ConvolutionPath::fft || (path == ConvolutionPath::automatic && M > kDirectHalfWidthLimit);
  if (!want_fft) return;

  auto f = std::make_unique<Fft>();
  int L = 1;
  while (L < n + 2 * M) L <<= 1;
  f->size = L;
  const int nc = L / 2 + 1;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    f->real = fftw_alloc_real(static_cast<std::size_t>(L));
    f->spec = fftw_alloc_complex(static_cast<std::size_t>(nc));
    f->forward = fftw_plan_dft_r2c_1d(L, f->real, f->spec, FFTW_ESTIMATE);
    f->backward = fftw_plan_dft_c2r_1d(L, f->spec, f->real, FFTW_ESTIMATE);
  }
  std::fill(f->real, f->real + L, 0.0);
  for (int j = 0; j <= 2 * M; ++j) f->real[j] = kernel_.weights[static_cast<std::size_t>(j)];
  fftw_execute_dft_r2c(f->forward, f->real, f->spec);
  f->kernel_spec.resize(static_cast<std::size_t>(nc));
  const double norm = kernel_.dx / L;
  for (int k = 0; k < nc; ++k) f->kernel_spec[static_cast<std::size_t>(k)] = std::complex<double>(f->spec[k][0], f->spec[k][1]) * norm;
  fft_ = std::move(f);
}

Convolver::~Convolver() = default;
Convolver::Convolver(Convolver&&) noexcept = default;
Convolver& Convolver::operator=(Convolver&&) noexcept = default;

void Convolver::extend(std::span<const double> values, const Closure& closure) {
  if (static_cast<int>(values.size()) != n_)
    fail(ErrorKind::invalid_argument, "convolution expects " + std::to_string(n_) + " values, got " +
                                          std::to_string(values.size()));
  const int M = kernel_.half_width;
  double left = closure.left, right = closure.right;
  if (closure.kind == ClosureKind::zero) left = right = 0.0;
  std::fill(ext_.begin(), ext_.begin() + M, left);
  std::copy(values.begin(), values.end(), ext_.begin() + M);
  std::fill(ext_.begin() + M + n_, ext_.end(), right);
}

void Convolver::apply_direct(std::span<double> out) const {
  const int M = kernel_.half_width;
  const int width = 2 * M + 1;
  const double* w = kernel_.weights.data();
  const double dx = kernel_.dx;
  for (int i = 0; i < n_; ++i) {
    const double* e = ext_.data() + i;
    double s = 0.0;
    for (int k = 0; k < width; ++k) s += w[k] * e[k];
    out[static_cast<std::size_t>(i)] = s * dx;
  }
}

void Convolver::apply_fft(std::span<double> out) {
  Fft& f = *fft_;
  const int M = kernel_.half_width;
  const int L = f.size;
  const int m = n_ + 2 * M;
  std::copy(ext_.begin(), ext_.end(), f.real);
  std::fill(f.real + m, f.real + L, 0.0);
  fftw_execute_dft_r2c(f.forward, f.real, f.spec);
  const int nc = L / 2 + 1;
  for (int k = 0; k < nc; ++k) {
    const std::complex<double> z = std::complex<double>(f.spec[k][0], f.spec[k][1]) * f.kernel_spec[static_cast<std::size_t>(k)];
    f.spec[k][0] = z.real();
    f.spec[k][1] = z.imag();
  }
  fftw_execute_dft_c2r(f.backward, f.spec, f.real);
  // circular wrap only reaches indices below 2M; those are the edge zone and are not read
  for (int i = 0; i < n_; ++i) out[static_cast<std::size_t>(i)] = f.real[i + 2 * M];
}

void Convolver::apply(std::span<const double> values, const Closure& closure, std::span<double> out) {
  if (static_cast<int>(out.size()) != n_) fail(ErrorKind::invalid_argument, "convolution output has wrong length");
  extend(values, closure);
  if (fft_) {
    apply_fft(out);
  } else {
    apply_direct(out);
  }
}

std::vector<double> Convolver::apply(std::span<const double> values, const Closure& closure) {
  std::vector<double> out(static_cast<std::size_t>(n_));
  apply(values, closure, out);
  return out;
}

std::vector<double> convolve(const Kernel& kernel, std::span<const double> values, const Closure& closure,
                             double grid_dx, ConvolutionPath path) {
  if (std::abs(kernel.dx - grid_dx) > 1e-14 * std::max(1.0, std::abs(grid_dx)))
    fail(ErrorKind::inconsistent_discretization, "kernel dx " + std::to_string(kernel.dx) + " differs from grid dx " +
                                                     std::to_string(grid_dx));
  Convolver c(kernel, static_cast<int>(values.size()), path);
  return c.apply(values, closure);
}

}  // namespace frontlab
