#pragma once

#include <span>
#include <vector>

#include "frontlab/convolution.hpp"
#include "frontlab/evolve.hpp"
#include "frontlab/field.hpp"
#include "frontlab/kernel.hpp"
#include "frontlab/media.hpp"

namespace frontlab {

/// Wave profile phi with phi(0) = pin_level, speed c.
struct TravelingWave {
  Grid1D grid;
  std::vector<double> profile;
  double speed = 0.0;
  double pin_level = 0.5;
  double trailing_change = 0.0;
  double relax_time = 0.0;
  Scheme scheme = Scheme::rk4;
  double dt = 0.0;
  double max_increase = 0.0;  // largest upward step of the profile

  double sample(double x) const;
  /// Field phi(x - y) on the given window (absolute coordinates), at time t.
  FieldState place(const Grid1D& window, double y, double t = 0.0) const;
  FieldState as_state() const;
};

struct WaveOptions {
  int n = 1024;
  double init_width = 0.0;     // 0 gives a sharp step
  double tolerance = 1e-7;     // sup-norm change per unit time
  double min_time = 20.0;
  double sample_interval = 1.0;
};

TravelingWave compute_wave(const Nonlinearity& nl, const Kernel& kernel, const SolverConfig& cfg, double pin_level,
                           double t_relax, const WaveOptions& opt = {});

struct ShiftMatch {
  double shift = 0.0;     // a(x) ~ b(x - shift)
  double distance = 0.0;  // sup-norm mismatch at that shift
  long cells = 0;
};

/// Integer-cell sup-norm scan followed by a 3-point parabolic refinement on the L2 mismatch.
ShiftMatch optimal_shift(std::span<const double> a, std::span<const double> b, const Grid1D& grid,
                         const Closure& closure = Closure::front(), double level = 0.5, long search_cells = 16);

/// sup_x |a(x) - b(x - shift)|.
double shifted_distance(std::span<const double> a, std::span<const double> b, double dx, double shift,
                        const Closure& closure = Closure::front());

struct UnbalancedCheck {
  double speed_fB = 0.0;
  double integral_fB = 0.0;
  double theta_B = 0.0;
  double speed_floor = 1e-3;
  bool pass = false;
  bool unresolved_sign = false;
  TravelingWave wave;
};

UnbalancedCheck check_unbalanced(const Nonlinearity& nl, const Kernel& kernel, const SolverConfig& cfg,
                                 double t_relax = 400.0, const WaveOptions& opt = {}, double speed_floor = 1e-3);

/// integral over [0,1] of an autonomous f (Simpson, exact for cubics).
double reaction_integral(const Nonlinearity& nl);

}  // namespace frontlab
