#pragma once

#include <span>
#include <utility>
#include <vector>

#include "frontlab/convolution.hpp"
#include "frontlab/field.hpp"
#include "frontlab/kernel.hpp"
#include "frontlab/media.hpp"

namespace frontlab {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Leftmost and rightmost crossings of a level, absolute coordinates.
struct Crossing {
  double x_minus = 0.0;
  double x_plus = 0.0;
};

Crossing interface_locations(const FieldState& state, double level);
/// Same, in window coordinates.
Crossing interface_locations_window(std::span<const double> values, const Grid1D& grid, double level);

struct InterfaceTrack {
  std::vector<double> levels;
  std::vector<double> times;
  std::vector<std::vector<double>> x_minus;  // [level][sample]
  std::vector<std::vector<double>> x_plus;
  std::vector<double> speeds;                // least-squares slope of x_minus per level

  explicit InterfaceTrack(std::vector<double> lv = {0.5});
  void record(const FieldState& state);
  int level_index(double level) const;
  std::size_t size() const { return times.size(); }
  void fit_speeds(double from_time = -1e300);
};

/// max of the centered difference u_x over |x - center| <= M (absolute center).
double steepness(const FieldState& state, double center, double M);

struct DecayFit {
  double c_plus = 0.0, h_plus = 0.0, resid_plus = 0.0;
  double c_minus = 0.0, h_minus = 0.0, resid_minus = 0.0;
  double a = 0.0, b = 0.0;
};

/// Right tail: log u(X + x) ~ -c+ (x - h+), x in [a, b].
DecayFit fit_decay_right(const FieldState& state, double X, double a, double b);
/// Left tail: log(1 - u(X + x)) ~ c- (x + h-), x in [-b, -a].
DecayFit fit_decay_left(const FieldState& state, double X, double a, double b);
DecayFit fit_decay(const FieldState& state, double X, double a, double b);

double width_diagnostic(const FieldState& state, double eps1, double eps2);
double width_diagnostic(const InterfaceTrack& track, double eps1, double eps2);

std::vector<double> interface_velocity(const InterfaceTrack& track, double level);

inline constexpr double kSteepnessFloor = 1e-6;

/// -[(J*u)(X) - u(X) + eps u_xx(X) + f(t, u(X))] / u_x(X) at the level crossing.
double pointwise_front_speed(const FieldState& state, const Nonlinearity& nl, const Kernel& kernel, double level,
                             const Closure& closure = Closure::front(), double epsilon = 0.0,
                             double floor = kSteepnessFloor);

}  // namespace frontlab
