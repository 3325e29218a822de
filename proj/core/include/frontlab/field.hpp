#pragma once

#include <vector>

#include "frontlab/grid.hpp"

namespace frontlab {

/// u(t, x_i) on a window, plus the time t.
struct FieldState {
  Grid1D grid;
  std::vector<double> values;
  double t = 0.0;

  static FieldState zeros(const Grid1D& grid, double t = 0.0) {
    return FieldState{grid, std::vector<double>(static_cast<std::size_t>(grid.n), 0.0), t};
  }
  double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return values[static_cast<std::size_t>(i)]; }
  int n() const { return grid.n; }
};

}  // namespace frontlab
