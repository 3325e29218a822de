#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "frontlab/kernel.hpp"

namespace frontlab {

enum class ClosureKind { front, constant, zero };

/// Values assumed for u outside the finite window.
struct Closure {
  ClosureKind kind = ClosureKind::front;
  double left = 1.0;
  double right = 0.0;

  static Closure front() { return {ClosureKind::front, 1.0, 0.0}; }
  static Closure constant(double l, double r) { return {ClosureKind::constant, l, r}; }
  static Closure zero() { return {ClosureKind::zero, 0.0, 0.0}; }
};

std::string to_string(const Closure& c);

inline constexpr int kDirectHalfWidthLimit = 128;

enum class ConvolutionPath { automatic, direct, fft };

/// Reusable discrete convolution for a fixed kernel and window size.
/// Not thread safe; each simulation owns its own instance.
class Convolver {
 public:
  Convolver(const Kernel& kernel, int n, ConvolutionPath path = ConvolutionPath::automatic);
  ~Convolver();
  Convolver(Convolver&&) noexcept;
  Convolver& operator=(Convolver&&) noexcept;
  Convolver(const Convolver&) = delete;
  Convolver& operator=(const Convolver&) = delete;

  void apply(std::span<const double> values, const Closure& closure, std::span<double> out);
  std::vector<double> apply(std::span<const double> values, const Closure& closure);

  bool uses_fft() const { return fft_ != nullptr; }
  int n() const { return n_; }
  const Kernel& kernel() const { return kernel_; }

 private:
  struct Fft;
  void extend(std::span<const double> values, const Closure& closure);
  void apply_direct(std::span<double> out) const;
  void apply_fft(std::span<double> out);

  Kernel kernel_;
  int n_;
  std::vector<double> ext_;
  std::unique_ptr<Fft> fft_;
};

/// result[i] = dx * sum_m w[m] * u_ext[i - m]
std::vector<double> convolve(const Kernel& kernel, std::span<const double> values, const Closure& closure,
                             double grid_dx, ConvolutionPath path = ConvolutionPath::automatic);

}  // namespace frontlab
