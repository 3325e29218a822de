#pragma once

#include <cstdint>

namespace frontlab {

/// Uniform 1D window. Node i sits at x_left + i*dx inside the window and at
/// x_left + i*dx + shift_accum() in absolute coordinates.
struct Grid1D {
  double x_left = 0.0;
  double dx = 0.1;
  int n = 8;
  std::int64_t shift_cells = 0;

  static Grid1D make(double x_left, double dx, int n);
  static Grid1D centered(double dx, int n);

  double shift_accum() const { return static_cast<double>(shift_cells) * dx; }
  double x(int i) const { return x_left + i * dx; }
  double absolute(int i) const { return x(i) + shift_accum(); }
  double x_right() const { return x(n - 1); }
  double length() const { return (n - 1) * dx; }
  double to_window(double absolute_x) const { return absolute_x - shift_accum(); }

  bool same_lattice(const Grid1D& other) const;
};

}  // namespace frontlab
