#include "frontlab/waves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "frontlab/error.hpp"
#include "frontlab/fronts.hpp"
#include "frontlab/interpolation.hpp"

namespace frontlab {

double TravelingWave::sample(double x) const {
  return std::clamp(sample_at(profile, grid, x, Closure::front()), 0.0, 1.0);
}

FieldState TravelingWave::place(const Grid1D& window, double y, double t) const {
  FieldState s = FieldState::zeros(window, t);
  for (int i = 0; i < window.n; ++i) s[i] = sample(window.absolute(i) - y);
  return s;
}

FieldState TravelingWave::as_state() const { return FieldState{grid, profile, 0.0}; }

double shifted_distance(std::span<const double> a, std::span<const double> b, double dx, double shift,
                        const Closure& closure) {
  const auto bs = shifted(b, dx, shift, closure);
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - bs[i]));
  return d;
}

ShiftMatch optimal_shift(std::span<const double> a, std::span<const double> b, const Grid1D& grid,
                         const Closure& closure, double level, long search_cells) {
  if (a.size() != b.size() || static_cast<int>(a.size()) != grid.n)
    fail(ErrorKind::invalid_argument, "optimal_shift needs two fields on the same window");
  const long n = grid.n;
  const double left = closure.kind == ClosureKind::zero ? 0.0 : closure.left;
  const double right = closure.kind == ClosureKind::zero ? 0.0 : closure.right;
  auto bv = [&](long j) { return j < 0 ? left : (j >= n ? right : b[static_cast<std::size_t>(j)]); };

  long k0 = 0;
  long K = search_cells;
  try {
    const double xa = interface_locations_window(a, grid, level).x_minus;
    const double xb = interface_locations_window(b, grid, level).x_minus;
    k0 = std::lround((xa - xb) / grid.dx);
  } catch (const Error&) {
    K = std::max(K, n / 4);
  }
  auto sup_at = [&](long k) {
    double d = 0.0;
    for (long i = 0; i < n; ++i) d = std::max(d, std::abs(a[static_cast<std::size_t>(i)] - bv(i - k)));
    return d;
  };
  auto l2_at = [&](long k) {
    double e = 0.0;
    for (long i = 0; i < n; ++i) {
      const double r = a[static_cast<std::size_t>(i)] - bv(i - k);
      e += r * r;
    }
    return e;
  };
  long best = k0;
  double best_d = std::numeric_limits<double>::infinity();
  for (long k = k0 - K; k <= k0 + K; ++k) {
    const double d = sup_at(k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  if (best == k0 - K || best == k0 + K)
    fail(ErrorKind::diagnostic, "optimal shift not bracketed by the integer scan");

  const double em = l2_at(best - 1), e0 = l2_at(best), ep = l2_at(best + 1);
  const double curv = em - 2.0 * e0 + ep;
  double frac = curv > 0.0 ? 0.5 * (em - ep) / curv : 0.0;
  frac = std::clamp(frac, -1.0, 1.0);
  ShiftMatch m;
  m.cells = best;
  m.shift = (static_cast<double>(best) + frac) * grid.dx;
  m.distance = shifted_distance(a, b, grid.dx, m.shift, closure);
  if (m.distance > best_d) {
    m.shift = static_cast<double>(best) * grid.dx;
    m.distance = best_d;
  }
  return m;
}

namespace {

std::vector<double> pinned_profile(const FieldState& s, double level, double& x_window) {
  const double x_lin = interface_locations_window(s.values, s.grid, level).x_minus;
  x_window = refine_crossing(s.values, s.grid, level, x_lin, Closure::front());
  // P(x_i) = u(x_i + X), with node x = 0 mapped onto the crossing
  return shifted(s.values, s.grid.dx, s.grid.x_left - std::round(s.grid.x_left / s.grid.dx) * s.grid.dx - x_window,
                 Closure::front());
}

}  // namespace

TravelingWave compute_wave(const Nonlinearity& nl, const Kernel& kernel, const SolverConfig& cfg_in,
                           double pin_level, double t_relax, const WaveOptions& opt) {
  if (!nl.autonomous()) fail(ErrorKind::invalid_argument, "compute_wave needs a time-constant nonlinearity");
  if (!(pin_level > 0.0 && pin_level < 1.0)) fail(ErrorKind::invalid_argument, "pin level must lie in (0,1)");
  const Grid1D grid = Grid1D::centered(kernel.dx, opt.n);
  SolverConfig cfg = cfg_in;
  cfg.recenter = true;
  cfg.recenter_level = pin_level;
  cfg.recenter_target = 0.0;
  cfg.closure = Closure::front();

  FieldState s = FieldState::zeros(grid, 0.0);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    if (opt.init_width > 0.0) {
      s[i] = 0.5 * (1.0 - std::tanh(x / opt.init_width));
    } else {
      s[i] = x < 0.0 ? 1.0 : (x == 0.0 ? 0.5 : 0.0);
    }
  }

  Simulation sim(nl, kernel, cfg, {s});
  std::vector<double> times, xs;
  std::vector<double> last;
  double change = std::numeric_limits<double>::infinity();
  double t_stop = -1.0;
  const double interval = opt.sample_interval;
  bool done = false;
  auto observe = [&](const Simulation& sm) {
    if (done) return;
    const FieldState& st = sm.state();
    double xw = 0.0;
    auto p = pinned_profile(st, pin_level, xw);
    times.push_back(st.t);
    xs.push_back(xw + st.grid.shift_accum());
    if (!last.empty()) {
      double d = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) d = std::max(d, std::abs(p[i] - last[i]));
      change = d / interval;
      if (change < opt.tolerance && st.t >= opt.min_time) {
        done = true;
        t_stop = st.t;
      }
    }
    last = std::move(p);
  };
  double t = 0.0;
  observe(sim);
  while (!done && t < t_relax) {
    const double t_next = std::min(t_relax, t + interval);
    sim.advance_to(t_next);
    t = t_next;
    observe(sim);
  }
  if (!done) {
    std::ostringstream os;
    os.precision(6);
    os << "wave did not settle by t = " << t_relax << "; trailing change per unit time " << change;
    fail(ErrorKind::convergence, os.str());
  }

  std::vector<double> tt, xx;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= 0.5 * t_stop) {
      tt.push_back(times[i]);
      xx.push_back(xs[i]);
    }
  TravelingWave w;
  w.grid = grid;
  w.grid.x_left = -(grid.n / 2) * grid.dx;
  w.profile = last;
  w.speed = fit_line(tt, xx).slope;
  w.pin_level = pin_level;
  w.trailing_change = change;
  w.relax_time = t_stop;
  w.scheme = cfg.scheme;
  w.dt = cfg.dt;
  for (std::size_t i = 1; i < w.profile.size(); ++i) w.max_increase = std::max(w.max_increase, w.profile[i] - w.profile[i - 1]);
  if (w.profile.front() <= 0.99 || w.profile.back() >= 0.01)
    fail(ErrorKind::window_too_small, "wave tails not resolved in the window");
  return w;
}

double reaction_integral(const Nonlinearity& nl) {
  if (!nl.autonomous()) fail(ErrorKind::invalid_argument, "reaction integral needs a time-constant nonlinearity");
  const int q = 2000;
  double s = 0.0;
  for (int i = 0; i <= q; ++i) {
    const double u = static_cast<double>(i) / q;
    const double w = (i == 0 || i == q) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * nl.f(0.0, u);
  }
  return s / (3.0 * q);
}

UnbalancedCheck check_unbalanced(const Nonlinearity& nl, const Kernel& kernel, const SolverConfig& cfg,
                                 double t_relax, const WaveOptions& opt, double speed_floor) {
  UnbalancedCheck r;
  const Nonlinearity fb = nl.lower_bound();
  r.theta_B = fb.theta_hi();
  r.integral_fB = reaction_integral(fb);
  r.speed_floor = speed_floor;
  r.wave = compute_wave(fb, kernel, cfg, 0.5, t_relax, opt);
  r.speed_fB = r.wave.speed;
  r.pass = r.speed_fB > speed_floor;
  r.unresolved_sign = std::abs(r.speed_fB) < speed_floor;
  return r;
}

}  // namespace frontlab
