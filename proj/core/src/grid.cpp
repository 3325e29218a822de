#include "frontlab/grid.hpp"

#include <cmath>
#include <string>

#include "frontlab/error.hpp"

namespace frontlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::inconsistent_discretization: return "inconsistent-discretization";
    case ErrorKind::resource: return "resource";
    case ErrorKind::domain: return "domain";
    case ErrorKind::stiffness: return "stiffness";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::tracking_lost: return "tracking-lost";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::fit_window: return "fit-window";
    case ErrorKind::ill_conditioned_speed: return "ill-conditioned-speed";
    case ErrorKind::window_too_small: return "window-too-small";
    case ErrorKind::diagnostic: return "diagnostic";
  }
  return "unknown";
}

Grid1D Grid1D::make(double x_left, double dx, int n) {
  if (!(dx > 0.0) || !std::isfinite(dx)) fail(ErrorKind::invalid_argument, "grid dx must be positive");
  if (n < 8) fail(ErrorKind::invalid_argument, "grid needs at least 8 nodes, got " + std::to_string(n));
  if (!std::isfinite(x_left)) fail(ErrorKind::invalid_argument, "grid x_left must be finite");
  Grid1D g;
  g.x_left = x_left;
  g.dx = dx;
  g.n = n;
  return g;
}

Grid1D Grid1D::centered(double dx, int n) { return make(-(n / 2) * dx, dx, n); }

bool Grid1D::same_lattice(const Grid1D& other) const {
  return n == other.n && dx == other.dx && x_left == other.x_left && shift_cells == other.shift_cells;
}

}  // namespace frontlab
