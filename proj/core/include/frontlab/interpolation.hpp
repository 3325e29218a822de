#pragma once

#include <array>
#include <span>
#include <vector>

#include "frontlab/convolution.hpp"
#include "frontlab/grid.hpp"

namespace frontlab {

/// Six-point Lagrange weights for nodes at offsets -2..3 evaluated at r in [0,1).
std::array<double, 6> lagrange6_weights(double r);

/// Value of the gridded field at a window coordinate, extended by the closure.
double sample_at(std::span<const double> values, const Grid1D& grid, double x_window, const Closure& closure);

/// Samples u(x_i - shift) at every node (shift in physical units).
std::vector<double> shifted(std::span<const double> values, double dx, double shift, const Closure& closure);

/// Window coordinate where the smooth interpolant crosses level, starting from
/// the piecewise-linear crossing at x_guess. Assumes a single crossing nearby.
double refine_crossing(std::span<const double> values, const Grid1D& grid, double level, double x_guess,
                       const Closure& closure);

}  // namespace frontlab
