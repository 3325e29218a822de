#pragma once

#include <string>
#include <vector>

namespace frontlab {

enum class KernelFamily { gaussian, uniform, laplace };

const char* to_string(KernelFamily family);
KernelFamily parse_kernel_family(const std::string& name);

/// Symmetric dispersal kernel sampled at offsets m*dx, m = -M..M.
struct Kernel {
  std::vector<double> weights;  // index m + half_width
  double dx = 0.0;
  int half_width = 0;
  KernelFamily family = KernelFamily::gaussian;
  double scale = 1.0;
  int power = 1;  // N for an N-fold self-convolution

  double weight(int m) const { return weights[static_cast<std::size_t>(m + half_width)]; }
  double mass() const;
  std::size_t size() const { return weights.size(); }
};

inline constexpr int kDefaultHalfWidthCap = 1 << 20;

Kernel make_kernel(KernelFamily family, double scale, double dx, double trunc_tol);

/// N-fold self-convolution J^N on the same lattice.
Kernel iterate_kernel(const Kernel& kernel, int N, int half_width_cap = kDefaultHalfWidthCap);

/// Analytic mass of the family outside [-r, r].
double tail_mass(KernelFamily family, double scale, double r);

struct KernelReport {
  double mass_error = 0.0;
  double symmetry_error = 0.0;
  double min_weight = 0.0;
  bool differentiable = true;
  std::string note;
  bool admissible() const { return mass_error <= 1e-12 && symmetry_error == 0.0 && min_weight >= 0.0; }
};

KernelReport validate_kernel(const Kernel& kernel);

}  // namespace frontlab
