#include "frontlab/fronts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "frontlab/error.hpp"
#include "frontlab/interpolation.hpp"

namespace frontlab {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) fail(ErrorKind::invalid_argument, "line fit needs at least two matching points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) fail(ErrorKind::invalid_argument, "line fit with degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < n; ++i)
    f.max_residual = std::max(f.max_residual, std::abs(y[i] - (f.intercept + f.slope * x[i])));
  return f;
}

Crossing interface_locations_window(std::span<const double> u, const Grid1D& grid, double level) {
  if (!(level > 0.0 && level < 1.0)) fail(ErrorKind::invalid_argument, "interface level must lie in (0,1)");
  const int n = static_cast<int>(u.size());
  int first = -1, last = -1;
  for (int i = 0; i < n; ++i)
    if (u[static_cast<std::size_t>(i)] <= level) {
      first = i;
      break;
    }
  for (int i = n - 1; i >= 0; --i)
    if (u[static_cast<std::size_t>(i)] >= level) {
      last = i;
      break;
    }
  if (first < 0 || last < 0) fail(ErrorKind::tracking_lost, "level " + std::to_string(level) + " not attained");
  Crossing c;
  if (first == 0) {
    c.x_minus = grid.x(0);
  } else {
    const double a = u[static_cast<std::size_t>(first - 1)], b = u[static_cast<std::size_t>(first)];
    c.x_minus = grid.x(first - 1) + (a - level) / (a - b) * grid.dx;
  }
  if (last == n - 1) {
    c.x_plus = grid.x(n - 1);
  } else {
    const double a = u[static_cast<std::size_t>(last)], b = u[static_cast<std::size_t>(last + 1)];
    c.x_plus = grid.x(last) + (a - level) / (a - b) * grid.dx;
  }
  return c;
}

Crossing interface_locations(const FieldState& state, double level) {
  Crossing c = interface_locations_window(state.values, state.grid, level);
  const double s = state.grid.shift_accum();
  c.x_minus += s;
  c.x_plus += s;
  return c;
}

InterfaceTrack::InterfaceTrack(std::vector<double> lv) : levels(std::move(lv)) {
  std::sort(levels.begin(), levels.end());
  x_minus.resize(levels.size());
  x_plus.resize(levels.size());
  speeds.assign(levels.size(), 0.0);
}

void InterfaceTrack::record(const FieldState& state) {
  times.push_back(state.t);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const Crossing c = interface_locations(state, levels[k]);
    x_minus[k].push_back(c.x_minus);
    x_plus[k].push_back(c.x_plus);
  }
}

int InterfaceTrack::level_index(double level) const {
  for (std::size_t k = 0; k < levels.size(); ++k)
    if (std::abs(levels[k] - level) < 1e-12) return static_cast<int>(k);
  fail(ErrorKind::invalid_argument, "level " + std::to_string(level) + " not tracked");
}

void InterfaceTrack::fit_speeds(double from_time) {
  for (std::size_t k = 0; k < levels.size(); ++k) {
    std::vector<double> ts, xs;
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] >= from_time) {
        ts.push_back(times[i]);
        xs.push_back(x_minus[k][i]);
      }
    speeds[k] = ts.size() >= 2 ? fit_line(ts, xs).slope : 0.0;
  }
}

double steepness(const FieldState& state, double center, double M) {
  const Grid1D& g = state.grid;
  const double lo = center - M, hi = center + M;
  if (lo < g.absolute(1) - 1e-12 || hi > g.absolute(g.n - 2) + 1e-12)
    fail(ErrorKind::invalid_argument, "steepness window exceeds the grid interior");
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < g.n - 1; ++i) {
    const double x = g.absolute(i);
    if (x < lo - 1e-9 * g.dx || x > hi + 1e-9 * g.dx) continue;
    best = std::max(best, (state[i + 1] - state[i - 1]) / (2.0 * g.dx));
  }
  return best;
}

namespace {

void collect(const FieldState& state, double X, double lo, double hi, bool right, std::vector<double>& z,
             std::vector<double>& y) {
  const Grid1D& g = state.grid;
  for (int i = 0; i < g.n; ++i) {
    const double d = g.absolute(i) - X;
    if (d < lo - 1e-9 * g.dx || d > hi + 1e-9 * g.dx) continue;
    const double v = right ? state[i] : 1.0 - state[i];
    if (!(v > 0.0)) fail(ErrorKind::fit_window, "nonpositive value in decay fit window");
    z.push_back(d);
    y.push_back(std::log(v));
  }
  if (z.size() < 20)
    fail(ErrorKind::fit_window, "decay fit window holds " + std::to_string(z.size()) + " nodes, need 20");
}

}  // namespace

DecayFit fit_decay_right(const FieldState& state, double X, double a, double b) {
  if (!(a > 0.0 && b > a)) fail(ErrorKind::invalid_argument, "decay fit range needs 0 < a < b");
  std::vector<double> z, y;
  collect(state, X, a, b, true, z, y);
  if (!(std::exp(y.back()) > 10.0 * std::numeric_limits<double>::epsilon()))
    fail(ErrorKind::fit_window, "right tail below floating-point floor");
  const LineFit lf = fit_line(z, y);
  DecayFit d;
  d.a = a;
  d.b = b;
  d.c_plus = -lf.slope;
  d.h_plus = lf.intercept / d.c_plus;
  d.resid_plus = lf.max_residual;
  return d;
}

DecayFit fit_decay_left(const FieldState& state, double X, double a, double b) {
  if (!(a > 0.0 && b > a)) fail(ErrorKind::invalid_argument, "decay fit range needs 0 < a < b");
  std::vector<double> z, y;
  collect(state, X, -b, -a, false, z, y);
  if (!(std::exp(y.front()) > 10.0 * std::numeric_limits<double>::epsilon()))
    fail(ErrorKind::fit_window, "left tail below floating-point floor");
  const LineFit lf = fit_line(z, y);
  DecayFit d;
  d.a = a;
  d.b = b;
  d.c_minus = lf.slope;
  d.h_minus = lf.intercept / d.c_minus;
  d.resid_minus = lf.max_residual;
  return d;
}

DecayFit fit_decay(const FieldState& state, double X, double a, double b) {
  DecayFit r = fit_decay_right(state, X, a, b);
  const DecayFit l = fit_decay_left(state, X, a, b);
  r.c_minus = l.c_minus;
  r.h_minus = l.h_minus;
  r.resid_minus = l.resid_minus;
  return r;
}

double width_diagnostic(const FieldState& state, double eps1, double eps2) {
  if (!(eps1 > 0.0 && eps1 <= eps2 && eps2 < 1.0)) fail(ErrorKind::invalid_argument, "width needs 0 < eps1 <= eps2 < 1");
  const Grid1D& g = state.grid;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int i = 0; i + 1 < g.n; ++i) {
    const double a = state[i], b = state[i + 1];
    double s0, s1;
    if (a == b) {
      if (a < eps1 || a > eps2) continue;
      s0 = 0.0;
      s1 = 1.0;
    } else {
      s0 = (eps1 - a) / (b - a);
      s1 = (eps2 - a) / (b - a);
      if (s0 > s1) std::swap(s0, s1);
      s0 = std::max(s0, 0.0);
      s1 = std::min(s1, 1.0);
      if (s0 > s1) continue;
    }
    lo = std::min(lo, g.x(i) + s0 * g.dx);
    hi = std::max(hi, g.x(i) + s1 * g.dx);
  }
  return hi >= lo ? hi - lo : 0.0;
}

double width_diagnostic(const InterfaceTrack& track, double eps1, double eps2) {
  if (!(eps1 > 0.0 && eps1 <= eps2 && eps2 < 1.0)) fail(ErrorKind::invalid_argument, "width needs 0 < eps1 <= eps2 < 1");
  const int k1 = track.level_index(eps1), k2 = track.level_index(eps2);
  double w = 0.0;
  for (std::size_t i = 0; i < track.times.size(); ++i) {
    const double right = std::max(track.x_plus[k1][i], track.x_plus[k2][i]);
    const double left = std::min(track.x_minus[k1][i], track.x_minus[k2][i]);
    w = std::max(w, right - left);
  }
  return w;
}

std::vector<double> interface_velocity(const InterfaceTrack& track, double level) {
  const int k = track.level_index(level);
  const auto& t = track.times;
  const auto& x = track.x_minus[static_cast<std::size_t>(k)];
  const std::size_t n = t.size();
  if (n < 2) fail(ErrorKind::invalid_argument, "interface velocity needs two samples");
  std::vector<double> v(n);
  v[0] = (x[1] - x[0]) / (t[1] - t[0]);
  v[n - 1] = (x[n - 1] - x[n - 2]) / (t[n - 1] - t[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) v[i] = (x[i + 1] - x[i - 1]) / (t[i + 1] - t[i - 1]);
  return v;
}

double pointwise_front_speed(const FieldState& state, const Nonlinearity& nl, const Kernel& kernel, double level,
                             const Closure& closure, double epsilon, double floor) {
  const Grid1D& g = state.grid;
  if (std::abs(kernel.dx - g.dx) > 1e-14 * g.dx)
    fail(ErrorKind::inconsistent_discretization, "kernel dx differs from grid dx");
  const double X = interface_locations_window(state.values, g, level).x_minus;
  const double s = (X - g.x_left) / g.dx;
  const long i0 = static_cast<long>(std::floor(s));
  const double r = s - static_cast<double>(i0);
  const double left = closure.kind == ClosureKind::zero ? 0.0 : closure.left;
  const double right = closure.kind == ClosureKind::zero ? 0.0 : closure.right;
  auto u = [&](long i) {
    if (i < 0) return left;
    if (i >= g.n) return right;
    return state.values[static_cast<std::size_t>(i)];
  };
  const int M = kernel.half_width;
  const auto w = lagrange6_weights(r);
  double conv = 0.0, ux = 0.0, uxx = 0.0, uX = 0.0;
  for (int j = 0; j < 6; ++j) {
    const long i = i0 + j - 2;
    double c = 0.0;
    for (int m = -M; m <= M; ++m) c += kernel.weight(m) * u(i - m);
    c *= kernel.dx;
    const double wj = w[static_cast<std::size_t>(j)];
    conv += wj * c;
    ux += wj * (u(i + 1) - u(i - 1)) / (2.0 * g.dx);
    uxx += wj * (u(i + 1) - 2.0 * u(i) + u(i - 1)) / (g.dx * g.dx);
    uX += wj * u(i);
  }
  if (!(std::abs(ux) >= floor))
    fail(ErrorKind::ill_conditioned_speed, "|u_x| at the crossing is below the steepness floor");
  return -(conv - uX + epsilon * uxx + nl.f(state.t, uX)) / ux;
}

}  // namespace frontlab
