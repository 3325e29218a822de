#include "frontlab/theorems.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "frontlab/csv.hpp"
#include "frontlab/error.hpp"
#include "frontlab/fronts.hpp"
#include "frontlab/interpolation.hpp"

namespace frontlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double signal_mean(const Nonlinearity& nl) {
  if (nl.family() == NonlinearityFamily::cubic_theta) return nl.signal().mean;
  return nl.theta_at(0.0);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

/// Refined absolute crossing of a level (leftmost).
double crossing(const FieldState& s, double level) {
  const double xl = interface_locations_window(s.values, s.grid, level).x_minus;
  return refine_crossing(s.values, s.grid, level, xl, Closure::front()) + s.grid.shift_accum();
}

/// Values of u(X + x_j) on a centered window, X the refined crossing of level.
std::vector<double> pin(const FieldState& s, double level, const Grid1D& target) {
  const double X = crossing(s, level) - s.grid.shift_accum();
  std::vector<double> out(static_cast<std::size_t>(target.n));
  for (int j = 0; j < target.n; ++j)
    out[static_cast<std::size_t>(j)] = sample_at(s.values, s.grid, target.x(j) + X, Closure::front());
  return out;
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double max_increase(std::span<const double> v) {
  double m = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) m = std::max(m, v[i] - v[i - 1]);
  return m;
}

/// Boundary of a monotone predicate on [lo, hi]; pred(lo) true, pred(hi) false.
double bisect(const std::function<bool(double)>& pred, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

struct SandwichSide {
  double value = 0.0;
  bool bounded = true;
};

/// Largest xi with u(x - xi) - delta <= v everywhere.
SandwichSide lower_shift(const std::vector<double>& u, const std::vector<double>& v, double dx, double delta,
                         double range, double slack) {
  auto ok = [&](double xi) {
    const auto us = shifted(u, dx, xi, Closure::front());
    for (std::size_t i = 0; i < v.size(); ++i)
      if (us[i] - delta > v[i] + slack) return false;
    return true;
  };
  if (!ok(-range)) fail(ErrorKind::diagnostic, "lower sandwich fails for every shift");
  if (ok(range)) return {range, false};
  return {bisect(ok, -range, range, 1e-7 * dx), true};
}

/// Smallest xi with v <= u(x - xi) + delta everywhere.
SandwichSide upper_shift(const std::vector<double>& u, const std::vector<double>& v, double dx, double delta,
                         double range, double slack) {
  auto bad = [&](double xi) {
    const auto us = shifted(u, dx, xi, Closure::front());
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] > us[i] + delta + slack) return true;
    return false;
  };
  if (bad(range)) fail(ErrorKind::diagnostic, "upper sandwich fails for every shift");
  if (!bad(-range)) return {-range, false};
  const double b = bisect(bad, -range, range, 1e-7 * dx);
  return {b + 1e-7 * dx, true};
}

/// Smallest M with u <= theta0 - mu right of X + M and u >= theta1 + mu left of X - M, over all samples.
double plateau_distance(const std::vector<FieldState>& samples, double lo, double hi) {
  double M = 0.0;
  for (const auto& s : samples) {
    const double X = interface_locations(s, 0.5).x_minus;
    for (int i = 0; i < s.n(); ++i) {
      const double x = s.grid.absolute(i) - X;
      if (x > 0.0 && s[i] > lo) M = std::max(M, x);
      if (x < 0.0 && s[i] < hi) M = std::max(M, -x);
    }
  }
  return M;
}

double steepness_bound(const std::vector<FieldState>& samples, double M) {
  double c = -kInf;
  for (const auto& s : samples) c = std::max(c, steepness(s, interface_locations(s, 0.5).x_minus, M));
  return c;
}

struct DecayRate {
  double rate = std::numeric_limits<double>::quiet_NaN();
  int points = 0;
};

/// -slope of log d over samples with d above the floor, restricted to t >= from.
DecayRate log_decay(const std::vector<double>& t, const std::vector<double>& d, double from, double floor) {
  std::vector<double> tt, ld;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= from && d[i] > floor) {
      tt.push_back(t[i]);
      ld.push_back(std::log(d[i]));
    }
  if (tt.size() < 3) {
    tt.clear();
    ld.clear();
    for (std::size_t i = 0; i < t.size(); ++i)
      if (d[i] > floor) {
        tt.push_back(t[i]);
        ld.push_back(std::log(d[i]));
      }
    if (tt.size() > 6) {
      tt.erase(tt.begin(), tt.end() - 6);
      ld.erase(ld.begin(), ld.end() - 6);
    }
  }
  DecayRate r;
  r.points = static_cast<int>(tt.size());
  if (tt.size() >= 3) r.rate = -fit_line(tt, ld).slope;
  return r;
}

SolverConfig frozen(SolverConfig cfg) {
  cfg.recenter = false;
  return cfg;
}

void add_series(ExperimentReport& r, const std::string& name, std::vector<double> t, std::vector<double> v) {
  r.series[name] = Series{std::move(t), std::move(v)};
}

double smoothstep_down(double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

}  // namespace

Lab Lab::standard(const Nonlinearity& nl, double scale, double dx, int n) {
  Lab lab;
  lab.nl = nl;
  lab.kernel = make_kernel(KernelFamily::gaussian, scale, dx, 1e-12);
  lab.grid = Grid1D::centered(dx, n);
  lab.order_cfg.scheme = Scheme::euler_monotone;
  lab.order_cfg.dt = std::min(0.1, 0.9 * monotone_dt_limit(nl, 0.0, dx));
  lab.rate_cfg.scheme = Scheme::rk4;
  lab.rate_cfg.dt = 0.1;
  lab.wave.n = n;
  return lab;
}

std::string Lab::artifact(const std::string& file) const {
  if (out_dir.empty()) return {};
  std::filesystem::create_directories(out_dir);
  return out_dir + "/" + file;
}

// ---------------------------------------------------------------------------
// front construction

namespace {

struct PinProbe {
  double value = 0.0;  // u(0, 0)
  double X = 0.0;      // crossing of the target level at t = 0
};

PinProbe probe(double s, double y, const Nonlinearity& nl, const Kernel& kernel, const SolverConfig& cfg,
               const Grid1D& grid, const TravelingWave& wave, double theta, FieldState* out = nullptr) {
  Grid1D g = Grid1D::centered(grid.dx, grid.n);
  g.shift_cells = std::llround(y / grid.dx);
  Simulation sim(nl, kernel, cfg, {wave.place(g, y, s)});
  sim.advance_to(0.0);
  const FieldState& st = sim.state();
  const double xw = st.grid.to_window(0.0);
  if (xw < st.grid.x(2) || xw > st.grid.x(st.n() - 3))
    fail(ErrorKind::window_too_small, "origin left the window while pinning");
  PinProbe p;
  p.value = sample_at(st.values, st.grid, xw, cfg.closure);
  p.X = crossing(st, theta);
  if (out) *out = st;
  return p;
}

}  // namespace

double pin_shift(double s, const Nonlinearity& nl, const Kernel& kernel, const SolverConfig& cfg, const Grid1D& grid,
                 const TravelingWave& wave, double theta) {
  if (!(s < 0.0)) fail(ErrorKind::invalid_argument, "pin_shift needs s < 0");
  if (!(theta >= nl.theta_lo() - 1e-12 && theta <= nl.theta_hi() + 1e-12) || !(theta > 0.0 && theta < 1.0))
    fail(ErrorKind::invalid_argument, "target level must lie in [theta_lo, theta_hi]");
  const double dx = grid.dx;
  const double limit = 0.5 * grid.length();

  std::vector<std::pair<double, double>> seen;
  auto g = [&](double y) {
    const double v = probe(s, y, nl, kernel, cfg, grid, wave, theta).value;
    seen.emplace_back(y, v);
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 1; i < seen.size(); ++i)
      if (seen[i].second < seen[i - 1].second - 1e-9)
        fail(ErrorKind::diagnostic, "pinning map is not monotone in the shift");
    return v;
  };

  // u(0, 0) is non-decreasing in y
  const double y0 = wave.speed * s;
  const PinProbe p0 = probe(s, y0, nl, kernel, cfg, grid, wave, theta);
  seen.emplace_back(y0, p0.value);
  const double guess = y0 - p0.X;

  double lo = guess - dx, hi = guess + dx;
  double glo = g(lo), ghi = g(hi);
  double step = dx;
  while (glo > theta) {
    step *= 2.0;
    lo -= step;
    if (std::abs(lo - guess) > limit) fail(ErrorKind::window_too_small, "pinning bracket exceeds the window");
    glo = g(lo);
  }
  step = dx;
  while (ghi < theta) {
    step *= 2.0;
    hi += step;
    if (std::abs(hi - guess) > limit) fail(ErrorKind::window_too_small, "pinning bracket exceeds the window");
    ghi = g(hi);
  }
  while (hi - lo > 0.25 * dx) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm <= theta) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
      ghi = gm;
    }
  }
  if (glo == ghi) return 0.5 * (lo + hi);
  return lo + (theta - glo) / (ghi - glo) * (hi - lo);
}

FrontRun construct_front(const Lab& lab, const FrontOptions& opt) {
  FrontRun run;
  ExperimentReport& r = run.report;
  r.name = "front";
  r.labels["medium"] = lab.nl.describe();
  r.labels["scheme"] = to_string(lab.order_cfg.scheme);
  r.parameters["t_probe"] = opt.t_probe;
  r.parameters["epsilon"] = lab.order_cfg.epsilon;
  if (opt.s_list.empty()) fail(ErrorKind::invalid_argument, "s_list is empty");
  for (std::size_t i = 0; i < opt.s_list.size(); ++i) {
    if (!(opt.s_list[i] < 0.0)) fail(ErrorKind::invalid_argument, "start times must be negative");
    if (i > 0 && !(opt.s_list[i] < opt.s_list[i - 1])) fail(ErrorKind::invalid_argument, "start times must decrease");
  }
  const double theta = opt.pin_theta > 0.0 ? opt.pin_theta : signal_mean(lab.nl);
  run.pin_theta = theta;
  r.parameters["pin_theta"] = theta;

  const Nonlinearity fb = lab.nl.lower_bound();
  SolverConfig cfg = lab.order_cfg;
  run.bound_wave = compute_wave(fb, lab.kernel, cfg, 0.5, lab.t_relax, lab.wave);
  r.metric("speed_fB") = run.bound_wave.speed;
  if (!(run.bound_wave.speed > 1e-3) && lab.order_cfg.epsilon == 0.0) {
    r.error = "bounding reaction has no positive wave speed (" + fmt(run.bound_wave.speed) + ")";
    return run;
  }

  run.pinned_grid = Grid1D::centered(lab.grid.dx, lab.grid.n);
  std::vector<std::vector<double>> profiles;
  std::vector<double> distances;
  for (std::size_t k = 0; k < opt.s_list.size(); ++k) {
    const double s = opt.s_list[k];
    const double y = pin_shift(s, lab.nl, lab.kernel, cfg, lab.grid, run.bound_wave, theta);
    FieldState st;
    const PinProbe p = probe(s, y, lab.nl, lab.kernel, cfg, lab.grid, run.bound_wave, theta, &st);
    r.metric("y_s_" + std::to_string(k)) = y;
    r.metric("pin_error_" + std::to_string(k)) = std::abs(p.value - theta);
    profiles.push_back(pin(st, theta, run.pinned_grid));
    if (k > 0) {
      distances.push_back(sup_diff(profiles[k], profiles[k - 1]));
      r.metric("distance_" + std::to_string(k)) = distances.back();
    }
    if (k + 1 == opt.s_list.size()) run.state = st;
  }
  bool decreasing = true, strictly = true;
  for (std::size_t i = 1; i < distances.size(); ++i) {
    strictly = strictly && distances[i] < distances[i - 1];
    decreasing = decreasing && (distances[i] < distances[i - 1] || distances[i] < opt.noise_floor);
  }
  r.metric("strictly_decreasing") = strictly ? 1.0 : 0.0;
  run.pinned = profiles.back();
  r.metric("last_distance") = distances.empty() ? kInf : distances.back();
  r.metric("max_increase") = max_increase(run.state.values);

  // width over [0, t_probe]
  InterfaceTrack track({opt.width_lo, 0.5, opt.width_hi});
  Simulation sim(lab.nl, lab.kernel, cfg, {run.state});
  sim.advance_to(opt.t_probe, 0.5, [&](const Simulation& s) { track.record(s.state()); }, true);
  run.width = width_diagnostic(track, opt.width_lo, opt.width_hi);
  r.metric("width") = run.width;
  {
    std::vector<double> w;
    const int lo = track.level_index(opt.width_lo), hi = track.level_index(opt.width_hi);
    for (std::size_t i = 0; i < track.size(); ++i) w.push_back(track.x_minus[lo][i] - track.x_minus[hi][i]);
    add_series(r, "width", track.times, w);
  }

  r.require("distances_decreasing", decreasing);
  r.check("last_distance_small", "last_distance", "<", opt.accept_distance);
  r.check("monotone", "max_increase", "<=", 1e-10);
  r.scheme_of["distance"] = to_string(cfg.scheme);
  run.accepted = r.pass();

  if (const auto path = lab.artifact("front.csv"); !path.empty()) {
    std::vector<double> xs;
    for (int i = 0; i < run.pinned_grid.n; ++i) xs.push_back(run.pinned_grid.x(i));
    write_columns_csv(path, {"x", "u"}, {xs, run.pinned});
    r.artifacts.push_back(path);
  }
  if (const auto path = lab.artifact("front_track.csv"); !path.empty()) {
    write_track_csv(path, track);
    r.artifacts.push_back(path);
  }
  return run;
}

// ---------------------------------------------------------------------------

ExperimentReport steepness_experiment(const Lab& lab, const FrontRun& front, const SteepnessOptions& opt) {
  ExperimentReport r;
  r.name = "steepness";
  r.labels["medium"] = lab.nl.describe();
  r.parameters["M"] = opt.M;
  r.parameters["sample"] = opt.sample;
  const double T = lab.nl.signal().kind == SignalKind::periodic ? lab.nl.signal().period : 1.0;
  const double t_end = front.state.t + opt.periods * T;
  r.parameters["t_end"] = t_end;

  std::vector<double> ts, vs;
  Simulation sim(lab.nl, lab.kernel, lab.rate_cfg, {front.state});
  sim.advance_to(
      t_end, opt.sample,
      [&](const Simulation& s) {
        const FieldState& st = s.state();
        ts.push_back(st.t);
        vs.push_back(steepness(st, interface_locations(st, 0.5).x_minus, opt.M));
      },
      true);
  r.metric("max_ux") = *std::max_element(vs.begin(), vs.end());
  r.metric("min_ux") = *std::min_element(vs.begin(), vs.end());
  add_series(r, "max_ux", ts, vs);
  r.scheme_of["max_ux"] = to_string(lab.rate_cfg.scheme);
  r.check("uniformly_steep", "max_ux", "<", opt.threshold);
  return r;
}

// ---------------------------------------------------------------------------

const char* to_string(Perturbation::Kind k) {
  switch (k) {
    case Perturbation::Kind::shift: return "shift";
    case Perturbation::Kind::bump: return "bump";
    case Perturbation::Kind::step: return "step";
    case Perturbation::Kind::noise: return "noise";
  }
  return "?";
}

Perturbation::Kind parse_perturbation(const std::string& name) {
  for (auto k : {Perturbation::Kind::shift, Perturbation::Kind::bump, Perturbation::Kind::step,
                 Perturbation::Kind::noise})
    if (name == to_string(k)) return k;
  fail(ErrorKind::invalid_argument, "unknown perturbation '" + name + "'");
}

FieldState Perturbation::apply(const FieldState& front, double level) const {
  FieldState v = front;
  const double X = interface_locations(front, level).x_minus;
  const int n = front.n();
  switch (kind) {
    case Kind::shift:
      v.values = shifted(front.values, front.grid.dx, shift, Closure::front());
      break;
    case Kind::bump:
      for (int i = 0; i < n; ++i) {
        const double z = (front.grid.absolute(i) - X - shift) / width;
        v[i] += amplitude * std::exp(-z * z);
      }
      break;
    case Kind::step:
      for (int i = 0; i < n; ++i) {
        const double x = front.grid.absolute(i) - X - shift;
        v[i] = x < 0.0 ? 1.0 : (x == 0.0 ? 0.5 : 0.0);
      }
      break;
    case Kind::noise: {
      std::mt19937_64 rng(seed);
      for (int i = 0; i < n; ++i) {
        const double z = (front.grid.absolute(i) - X - shift) / width;
        const double e = 2.0 * uniform01(rng) - 1.0;
        v[i] = std::clamp(v[i] + amplitude * e * std::exp(-z * z), 0.0, 1.0);
      }
      break;
    }
  }
  return v;
}

ExperimentReport stability_experiment(const Lab& lab, const FrontRun& front, const Perturbation& p, double t_run,
                                      double sample) {
  ExperimentReport r;
  r.name = "stability";
  r.labels["medium"] = lab.nl.describe();
  r.labels["perturbation"] = to_string(p.kind);
  r.parameters["amplitude"] = p.amplitude;
  r.parameters["shift"] = p.shift;
  r.parameters["t_run"] = t_run;
  const Nonlinearity& nl = lab.nl;
  const FieldState u0 = front.state;
  const FieldState v0 = p.apply(u0);
  if (!(v0.values.front() > nl.theta1() && v0.values.back() < nl.theta0()))
    fail(ErrorKind::invalid_argument, "perturbed datum does not connect (theta1, 1] to [0, theta0)");

  const double t0 = u0.t;
  std::vector<FieldState> us, vs;
  Simulation sim(nl, lab.kernel, lab.order_cfg, {u0, v0});
  sim.advance_to(
      t0 + t_run, sample,
      [&](const Simulation& s) {
        us.push_back(s.state(0));
        vs.push_back(s.state(1));
      },
      true);

  std::vector<double> ts, ds, xis;
  for (std::size_t k = 0; k < us.size(); ++k) {
    const ShiftMatch m = optimal_shift(vs[k].values, us[k].values, us[k].grid);
    ts.push_back(us[k].t);
    ds.push_back(m.distance);
    xis.push_back(m.shift);
  }
  const DecayRate fit = log_decay(ts, ds, t0 + 0.5 * t_run, 1e-11);
  r.metric("omega_fit") = fit.rate;
  r.metric("fit_points") = fit.points;
  r.metric("d_end") = ds.back();
  r.metric("xi_end") = xis.back();
  add_series(r, "distance", ts, ds);
  add_series(r, "shift", ts, xis);

  // trapping envelope
  const double mu = 0.5 * std::min(nl.theta0(), 1.0 - nl.theta1());
  const double omega = nl.omega();
  const double c_star = nl.sup_abs_fu(-mu, 1.0 + mu, t0 + t_run);
  const double M = plateau_distance(us, nl.theta0() - mu, nl.theta1() + mu) + lab.grid.dx;
  const double c_M = steepness_bound(us, M);
  if (!(c_M < 0.0)) fail(ErrorKind::diagnostic, "front is not steep on |x - X| <= M");
  const double A = 2.0 * c_star / (-c_M);
  const double range = 0.5 * lab.grid.length();
  const double dx = lab.grid.dx;
  const double slack = 1e-9;
  const double xi0m = lower_shift(u0.values, v0.values, dx, mu, range, 0.0).value;
  const double xi0p = upper_shift(u0.values, v0.values, dx, mu, range, 0.0).value;
  double margin = kInf;
  long violations = 0;
  std::vector<double> lo_s, hi_s;
  for (std::size_t k = 0; k < us.size(); ++k) {
    const double e = std::exp(-omega * (us[k].t - t0));
    const double spread = A * mu / omega * (1.0 - e);
    const auto lo = shifted(us[k].values, dx, xi0m - spread, Closure::front());
    const auto hi = shifted(us[k].values, dx, xi0p + spread, Closure::front());
    double m = kInf;
    for (int i = 0; i < us[k].n(); ++i) {
      m = std::min(m, vs[k][i] - (lo[static_cast<std::size_t>(i)] - mu * e));
      m = std::min(m, hi[static_cast<std::size_t>(i)] + mu * e - vs[k][i]);
    }
    if (m < -slack) ++violations;
    margin = std::min(margin, m);
    lo_s.push_back(xi0m - spread);
    hi_s.push_back(xi0p + spread);
  }
  add_series(r, "xi_minus", ts, lo_s);
  add_series(r, "xi_plus", ts, hi_s);
  r.metric("mu") = mu;
  r.metric("omega") = omega;
  r.metric("C_star") = c_star;
  r.metric("M") = M;
  r.metric("C_M") = c_M;
  r.metric("A") = A;
  r.metric("xi0_minus") = xi0m;
  r.metric("xi0_plus") = xi0p;
  r.metric("envelope_margin") = margin;
  r.metric("envelope_violations") = static_cast<double>(violations);
  for (const char* k : {"omega_fit", "d_end", "envelope_margin"}) r.scheme_of[k] = to_string(lab.order_cfg.scheme);

  r.check("decays", "omega_fit", ">", 0.0);
  r.check("converged", "d_end", "<", 1e-4);
  r.check("envelope_holds", "envelope_violations", "==", 0.0);
  if (const auto path = lab.artifact("stability.csv"); !path.empty()) {
    write_columns_csv(path, {"t", "distance", "shift", "xi_minus", "xi_plus"}, {ts, ds, xis, lo_s, hi_s});
    r.artifacts.push_back(path);
  }
  return r;
}

// ---------------------------------------------------------------------------

ExperimentReport subsolution_residual(const Lab& lab, const ResidualOptions& opt) {
  ExperimentReport r;
  r.name = "subsolution";
  r.labels["medium"] = lab.nl.describe();
  r.parameters["t_run"] = opt.t_run;
  r.parameters["mu"] = opt.mu;
  const Nonlinearity& nl = lab.nl;
  if (!nl.autonomous()) fail(ErrorKind::invalid_argument, "residual check needs a time-constant medium");
  if (!(opt.mu > 0.0 && opt.mu < std::min(nl.theta0(), 1.0 - nl.theta1())))
    fail(ErrorKind::invalid_argument, "mu must lie in (0, min(theta0, 1 - theta1))");

  const SolverConfig cfg = frozen(lab.rate_cfg);
  const TravelingWave w = compute_wave(nl, lab.kernel, lab.rate_cfg, 0.5, lab.t_relax, lab.wave);
  r.metric("speed") = w.speed;

  auto run = [&](double dt) {
    SolverConfig c = cfg;
    c.dt = dt;
    std::vector<FieldState> samples;
    Simulation sim(nl, lab.kernel, c, {w.place(lab.grid, -0.5 * w.speed * opt.t_run)});
    sim.advance_to(opt.t_run, dt, [&](const Simulation& s) { samples.push_back(s.state()); }, true);
    return samples;
  };
  const auto us = run(cfg.dt);
  const auto us_half = run(0.5 * cfg.dt);
  std::vector<FieldState> us_half_thin;
  for (std::size_t k = 0; k < us_half.size(); k += 2) us_half_thin.push_back(us_half[k]);

  const ResidualField self = residual(us, nl, lab.kernel, cfg);
  const ResidualField self_half = residual(us_half_thin, nl, lab.kernel, cfg);
  const double tol = opt.safety * self.max_abs;
  r.metric("self_residual") = self.max_abs;
  r.metric("self_residual_half_dt") = self_half.max_abs;
  r.metric("tolerance") = tol;

  const double mu = opt.mu;
  const double omega = nl.omega();
  const double c_star = nl.sup_abs_fu(-mu, 1.0 + mu);
  const double M = plateau_distance(us, nl.theta0() - mu, nl.theta1() + mu) + lab.grid.dx;
  const double c_M = steepness_bound(us, M);
  if (!(c_M < 0.0)) fail(ErrorKind::diagnostic, "front is not steep on |x - X| <= M");
  const double A = 2.0 * c_star / (-c_M);
  r.metric("omega") = omega;
  r.metric("C_star") = c_star;
  r.metric("M") = M;
  r.metric("C_M") = c_M;
  r.metric("A") = A;
  r.metric("max_shift") = A * mu / omega;

  std::vector<FieldState> sub = us, super = us;
  for (std::size_t k = 0; k < us.size(); ++k) {
    const double t = us[k].t;
    const double e = std::exp(-omega * t);
    const double spread = A * mu / omega * (1.0 - e);
    sub[k].values = shifted(us[k].values, lab.grid.dx, -spread, Closure::front());
    super[k].values = shifted(us[k].values, lab.grid.dx, spread, Closure::front());
    for (auto& v : sub[k].values) v -= mu * e;
    for (auto& v : super[k].values) v += mu * e;
  }
  const ResidualField rs = residual(sub, nl, lab.kernel, cfg);
  const ResidualField rp = residual(super, nl, lab.kernel, cfg);
  r.metric("sub_residual_max") = rs.max;
  r.metric("super_residual_min") = rp.min;
  r.metric("neg_super_residual_min") = -rp.min;
  r.scheme_of["self_residual"] = to_string(cfg.scheme);
  r.check("subsolution", "sub_residual_max", "<=", tol);
  r.check("supersolution", "neg_super_residual_min", "<=", tol);
  return r;
}

// ---------------------------------------------------------------------------

ExperimentReport squeezing_diagnostic(const Lab& lab, const FrontRun& front, const SqueezeOptions& opt) {
  ExperimentReport r;
  r.name = "squeezing";
  r.labels["medium"] = lab.nl.describe();
  r.parameters["shift"] = opt.shift;
  r.parameters["bump"] = opt.bump;
  r.parameters["delta_hat"] = opt.delta_hat;
  r.parameters["sample"] = opt.sample;
  const Nonlinearity& nl = lab.nl;
  if (!(opt.delta_hat > 0.0 && opt.delta_hat < std::min(nl.theta0(), 1.0 - nl.theta1())))
    fail(ErrorKind::invalid_argument, "delta_hat must lie in (0, min(theta0, 1 - theta1))");
  Perturbation p;
  p.kind = Perturbation::Kind::shift;
  p.shift = opt.shift;
  FieldState v0 = p.apply(front.state);
  if (opt.bump != 0.0) {
    Perturbation b;
    b.kind = Perturbation::Kind::bump;
    b.amplitude = opt.bump;
    v0 = b.apply(v0);
  }
  const double t0 = front.state.t;
  const double omega = nl.omega();
  const double dx = lab.grid.dx;
  const double range = 0.5 * lab.grid.length();

  std::vector<double> ts, hs, xis;
  Simulation sim(nl, lab.kernel, lab.order_cfg, {front.state, v0});
  sim.advance_to(
      t0 + opt.t_run, opt.sample,
      [&](const Simulation& s) {
        const double delta = opt.delta_hat * std::exp(-omega * (s.t() - t0));
        const auto& u = s.state(0).values;
        const auto& v = s.state(1).values;
        const SandwichSide lo = lower_shift(u, v, dx, delta, range, 1e-12);
        const SandwichSide hi = upper_shift(u, v, dx, delta, range, 1e-12);
        if (!lo.bounded || !hi.bounded) fail(ErrorKind::diagnostic, "sandwich lost at t = " + fmt(s.t()));
        ts.push_back(s.t());
        xis.push_back(lo.value);
        hs.push_back(std::max(0.0, hi.value - lo.value));
      },
      true);
  r.metric("xi_hat") = xis.front();
  r.metric("h_hat") = hs.front();
  r.metric("h_end") = hs.back();
  r.metric("h_max") = *std::max_element(hs.begin(), hs.end());
  add_series(r, "h", ts, hs);
  add_series(r, "xi", ts, xis);

  auto fit_q = [&](std::size_t stride) {
    std::vector<double> tt, lh;
    for (std::size_t i = 0; i < ts.size(); i += stride)
      if (hs[i] > 1e-6 && hs[i] <= 1.0) {
        tt.push_back(ts[i]);
        lh.push_back(std::log(hs[i]));
      }
    if (tt.size() < 3) return std::numeric_limits<double>::quiet_NaN();
    return std::exp(fit_line(tt, lh).slope);
  };
  const double q = fit_q(1);
  const double q2 = fit_q(2);
  double rr = 0.0;
  for (std::size_t i = 0; i + 1 < hs.size(); ++i)
    if (hs[i] <= 1.0) rr = std::max(rr, hs[i + 1] - std::pow(q, opt.sample) * hs[i]);
  r.metric("q") = q;
  r.metric("q_double_interval") = q2;
  r.metric("q_relative_change") = std::abs(q2 - q) / q;
  r.metric("r") = std::isnan(q) ? q : rr;
  r.scheme_of["q"] = to_string(lab.order_cfg.scheme);
  r.notes.push_back("q is the contraction factor per unit time fitted to log h over samples with 1e-6 < h <= 1");
  r.check("contracts", "q", "<", 1.0);
  return r;
}

// ---------------------------------------------------------------------------

ExperimentReport decay_experiment(const Lab& lab, const FrontRun& front, const DecayOptions& opt) {
  ExperimentReport r;
  r.name = "decay";
  r.labels["medium"] = lab.nl.describe();
  r.parameters["theta2"] = opt.theta2;
  r.parameters["h"] = opt.h;
  r.parameters["t_end"] = opt.t_end;
  const Nonlinearity& nl = lab.nl;
  if (!(opt.theta2 > 0.0 && opt.theta2 < std::min({0.25, nl.theta0(), 1.0 - nl.theta1()})))
    fail(ErrorKind::invalid_argument, "theta2 must lie in (0, min(1/4, theta0, 1 - theta1))");
  if (opt.t0_list.empty()) fail(ErrorKind::invalid_argument, "t0_list is empty");
  const double a = opt.fit_a * lab.kernel.scale, b = opt.fit_b * lab.kernel.scale;
  const SolverConfig& cfg = lab.order_cfg;

  // the front at each start time
  std::vector<double> starts = opt.t0_list;
  std::sort(starts.begin(), starts.end());
  std::vector<FieldState> at_start;
  {
    Simulation sim(nl, lab.kernel, cfg, {front.state});
    for (double t0 : starts) {
      if (t0 < front.state.t) fail(ErrorKind::invalid_argument, "start time precedes the front");
      sim.advance_to(t0);
      at_start.push_back(sim.state());
    }
  }

  std::vector<double> cps, cms;
  double gap = 0.0, order = kInf;
  FieldState front_end, plus_end;
  DecayFit first_plus;
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const FieldState& u = at_start[k];
    const double Xp = interface_locations(u, 1.0 - opt.theta2).x_minus;
    const double Xm = interface_locations(u, opt.theta2).x_plus;
    FieldState up = u, um = u;
    for (int i = 0; i < u.n(); ++i) {
      const double x = u.grid.absolute(i);
      up[i] = (1.0 - opt.theta2) * smoothstep_down((x - Xp + opt.h) / opt.h);
      um[i] = opt.theta2 + (1.0 - opt.theta2) * smoothstep_down((x - Xm) / opt.h);
    }
    Simulation sim(nl, lab.kernel, cfg, {u, up, um});
    sim.advance_to(
        opt.t_end, 1.0,
        [&](const Simulation& s) {
          const auto &f = s.state(0), &p = s.state(1), &m = s.state(2);
          for (int i = 0; i < f.n(); ++i) order = std::min({order, f[i] - p[i], m[i] - f[i]});
          const double X = interface_locations(f, 0.5).x_minus;
          gap = std::max({gap, std::abs(interface_locations(p, 0.5).x_minus - X),
                          std::abs(interface_locations(m, 0.5).x_minus - X)});
        },
        true);
    const FieldState& p = sim.state(1);
    const FieldState& m = sim.state(2);
    const DecayFit fp = fit_decay_right(p, interface_locations(p, 0.5).x_minus, a, b);
    const DecayFit fm = fit_decay_left(m, interface_locations(m, 0.5).x_minus, a, b);
    cps.push_back(fp.c_plus);
    cms.push_back(fm.c_minus);
    r.metric("c_plus_" + std::to_string(k)) = fp.c_plus;
    r.metric("c_minus_" + std::to_string(k)) = fm.c_minus;
    r.metric("h_plus_" + std::to_string(k)) = fp.h_plus;
    if (k == 0) {
      front_end = sim.state(0);
      plus_end = p;
      first_plus = fp;
    }
  }
  auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    return (*hi - *lo) / std::abs(mean);
  };
  r.metric("c_plus_min") = *std::min_element(cps.begin(), cps.end());
  r.metric("c_minus_min") = *std::min_element(cms.begin(), cms.end());
  r.metric("c_plus_spread") = spread(cps);
  r.metric("c_minus_spread") = spread(cms);
  r.metric("interface_gap") = gap;
  r.metric("order_margin") = order;

  // the bound carried over to the front itself
  {
    const double X = interface_locations(front_end, 0.5).x_minus;
    double excess = -kInf;
    for (int i = 0; i < front_end.n(); ++i) {
      const double x = front_end.grid.absolute(i) - X;
      if (x < a || x > b || !(front_end[i] > 0.0)) continue;
      excess = std::max(excess, std::log(front_end[i]) + first_plus.c_plus * (x - first_plus.h_plus));
    }
    r.metric("front_tail_excess") = excess;
  }
  r.check("c_plus_positive", "c_plus_min", ">", 0.0);
  r.check("c_minus_positive", "c_minus_min", ">", 0.0);
  r.check("c_plus_stable", "c_plus_spread", "<", opt.spread);
  r.check("c_minus_stable", "c_minus_spread", "<", opt.spread);
  r.check("order_preserved", "order_margin", ">=", -1e-12);
  r.check("gap_bounded", "interface_gap", "<", 0.25 * lab.grid.length());
  r.check("front_tail_bound", "front_tail_excess", "<=", opt.log_tol);

  if (nl.autonomous()) {
    const TravelingWave w = compute_wave(nl, lab.kernel, cfg, 0.5, lab.t_relax, lab.wave);
    const FieldState ws = w.as_state();
    const double X = interface_locations(ws, 0.5).x_minus;
    const DecayFit wf = fit_decay(ws, X, a, b);
    r.metric("wave_c_plus") = wf.c_plus;
    r.metric("wave_c_minus") = wf.c_minus;
    r.metric("c_plus_vs_wave") = std::abs(cps.front() - wf.c_plus) / wf.c_plus;
    r.metric("c_minus_vs_wave") = std::abs(cms.front() - wf.c_minus) / wf.c_minus;
    r.check("c_plus_matches_wave", "c_plus_vs_wave", "<", opt.spread);
    r.check("c_minus_matches_wave", "c_minus_vs_wave", "<", opt.spread);
  }
  r.scheme_of["c_plus"] = to_string(cfg.scheme);
  if (const auto path = lab.artifact("decay_tail.csv"); !path.empty()) {
    std::vector<double> xs, us;
    const double X = interface_locations(plus_end, 0.5).x_minus;
    for (int i = 0; i < plus_end.n(); ++i) {
      xs.push_back(plus_end.grid.absolute(i) - X);
      us.push_back(plus_end[i]);
    }
    write_columns_csv(path, {"x", "u"}, {xs, us});
    r.artifacts.push_back(path);
  }
  return r;
}

// ---------------------------------------------------------------------------

const char* to_string(InitialDatum::Kind k) {
  switch (k) {
    case InitialDatum::Kind::step: return "step";
    case InitialDatum::Kind::smooth_step: return "smooth_step";
    case InitialDatum::Kind::nonmonotone: return "nonmonotone";
  }
  return "?";
}

InitialDatum::Kind parse_initial_datum(const std::string& name) {
  for (auto k : {InitialDatum::Kind::step, InitialDatum::Kind::smooth_step, InitialDatum::Kind::nonmonotone})
    if (name == to_string(k)) return k;
  fail(ErrorKind::invalid_argument, "unknown initial datum '" + name + "'");
}

FieldState InitialDatum::build(const Grid1D& grid, double t) const {
  FieldState s = FieldState::zeros(grid, t);
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.absolute(i) - position;
    switch (kind) {
      case Kind::step: s[i] = x < 0.0 ? 1.0 : (x == 0.0 ? 0.5 : 0.0); break;
      case Kind::smooth_step: s[i] = 0.5 * (1.0 - std::tanh(x / width)); break;
      case Kind::nonmonotone: {
        const double z = x - 3.0 * width;
        s[i] = (x < 0.0 ? 1.0 : (x == 0.0 ? 0.5 : 0.0)) + bump * std::exp(-z * z);
        break;
      }
    }
  }
  return s;
}

ExperimentReport uniqueness_experiment(const Lab& lab, const InitialDatum& da, const InitialDatum& db, double t_run,
                                       double sample) {
  ExperimentReport r;
  r.name = "uniqueness";
  r.labels["medium"] = lab.nl.describe();
  r.labels["init_a"] = to_string(da.kind);
  r.labels["init_b"] = to_string(db.kind);
  r.parameters["t_run"] = t_run;
  std::vector<double> ts, ds, xis;
  Simulation sim(lab.nl, lab.kernel, lab.order_cfg, {da.build(lab.grid), db.build(lab.grid)});
  sim.advance_to(
      t_run, sample,
      [&](const Simulation& s) {
        const ShiftMatch m = optimal_shift(s.state(1).values, s.state(0).values, s.state(0).grid);
        ts.push_back(s.t());
        ds.push_back(m.distance);
        xis.push_back(m.shift);
      },
      true);
  double lo = kInf, hi = -kInf;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts[i] >= t_run * 2.0 / 3.0) {
      lo = std::min(lo, xis[i]);
      hi = std::max(hi, xis[i]);
    }
  r.metric("d_end") = ds.back();
  r.metric("xi_end") = xis.back();
  r.metric("xi_trailing_spread") = hi - lo;
  r.metric("omega_fit") = log_decay(ts, ds, 0.5 * t_run, 1e-11).rate;
  add_series(r, "distance", ts, ds);
  add_series(r, "shift", ts, xis);
  r.scheme_of["d_end"] = to_string(lab.order_cfg.scheme);
  r.check("converged", "d_end", "<", 1e-4);
  r.check("shift_settles", "xi_trailing_spread", "<=", lab.grid.dx);
  if (const auto path = lab.artifact("uniqueness.csv"); !path.empty()) {
    write_columns_csv(path, {"t", "distance", "shift"}, {ts, ds, xis});
    r.artifacts.push_back(path);
  }
  return r;
}

// ---------------------------------------------------------------------------

ExperimentReport periodicity_experiment(const Lab& lab, const FrontRun& front, const PeriodicityOptions& opt) {
  ExperimentReport r;
  r.name = "periodicity";
  r.labels["medium"] = lab.nl.describe();
  const Nonlinearity& nl = lab.nl;
  const TimeSignal& sig = nl.signal();
  double T = 0.0;
  if (!nl.autonomous() && sig.kind == SignalKind::periodic) T = sig.period;
  else if (nl.autonomous()) T = opt.period > 0.0 ? opt.period : 1.0;
  else fail(ErrorKind::invalid_argument, "periodicity experiment needs a periodic medium");
  if (opt.n_periods < 4) fail(ErrorKind::invalid_argument, "n_periods must be at least 4");
  const double level = opt.level > 0.0 ? opt.level : signal_mean(nl);
  r.parameters["period"] = T;
  r.parameters["n_periods"] = opt.n_periods;
  r.parameters["level"] = level;

  const double t0 = front.state.t;
  const int N = opt.n_periods;
  const int P = std::max(opt.phases, 1);
  std::vector<FieldState> at_period;
  std::vector<std::vector<double>> psi;
  std::vector<double> psi_t;
  const Grid1D pg = Grid1D::centered(lab.grid.dx, lab.grid.n);
  Simulation sim(nl, lab.kernel, lab.rate_cfg, {front.state});
  long tick = 0;
  sim.advance_to(
      t0 + N * T, T / P,
      [&](const Simulation& s) {
        if (tick % P == 0) at_period.push_back(s.state());
        if (tick >= static_cast<long>(N - 1) * P && tick < static_cast<long>(N) * P) {
          psi.push_back(pin(s.state(), level, pg));
          psi_t.push_back(s.t());
        }
        ++tick;
      },
      true);

  std::vector<double> ks, cs, ms;
  const int first = N / 2;
  for (int k = first; k < N; ++k) {
    const FieldState& a = at_period[static_cast<std::size_t>(k)];
    const FieldState& b = at_period[static_cast<std::size_t>(k + 1)];
    const double c = (crossing(b, level) - crossing(a, level)) / T;
    const double dk = static_cast<double>(b.grid.shift_cells - a.grid.shift_cells) * lab.grid.dx;
    const double m = shifted_distance(a.values, b.values, lab.grid.dx, -(c * T - dk));
    ks.push_back(a.t);
    cs.push_back(c);
    ms.push_back(m);
  }
  const auto [lo, hi] = std::minmax_element(cs.begin(), cs.end());
  double mean = 0.0;
  for (double c : cs) mean += c;
  mean /= static_cast<double>(cs.size());
  r.metric("c") = mean;
  r.metric("c_spread") = (*hi - *lo) / std::abs(mean);
  r.metric("m_max") = *std::max_element(ms.begin(), ms.end());
  add_series(r, "c", ks, cs);
  add_series(r, "mismatch", ks, ms);
  r.scheme_of["c"] = to_string(lab.rate_cfg.scheme);
  r.check("speeds_agree", "c_spread", "<", 0.01);
  r.check("periodic_profile", "m_max", "<", 1e-3);
  if (nl.autonomous()) {
    const TravelingWave w = compute_wave(nl, lab.kernel, lab.rate_cfg, 0.5, lab.t_relax, lab.wave);
    r.metric("wave_speed") = w.speed;
    r.metric("c_vs_wave") = std::abs(mean - w.speed) / std::abs(w.speed);
    r.check("matches_wave", "c_vs_wave", "<", 0.01);
  }
  if (const auto path = lab.artifact("psi.csv"); !path.empty()) {
    std::vector<std::string> header{"x"};
    std::vector<std::vector<double>> cols(1);
    for (int i = 0; i < pg.n; ++i) cols[0].push_back(pg.x(i));
    for (std::size_t j = 0; j < psi.size(); ++j) {
      header.push_back("t=" + format_real(psi_t[j]));
      cols.push_back(psi[j]);
    }
    write_columns_csv(path, header, cols);
    r.artifacts.push_back(path);
  }
  return r;
}

// ---------------------------------------------------------------------------

ExperimentReport asymptotic_speed_experiment(const Lab& lab, const AsymptoticOptions& opt) {
  ExperimentReport r;
  r.name = "asymptotic_speed";
  r.labels["medium"] = lab.nl.describe();
  r.parameters["t_run"] = opt.t_run;
  r.parameters["cadence"] = opt.cadence;
  const Nonlinearity& nl = lab.nl;
  const SolverConfig& cfg = lab.rate_cfg;
  InitialDatum d;
  d.kind = InitialDatum::Kind::smooth_step;
  d.width = lab.kernel.scale;
  std::vector<double> ts, xs, vs;
  Simulation sim(nl, lab.kernel, cfg, {d.build(lab.grid)});
  sim.advance_to(
      opt.t_run, opt.cadence,
      [&](const Simulation& s) {
        ts.push_back(s.t());
        xs.push_back(interface_locations(s.state(), 0.5).x_minus);
        vs.push_back(pointwise_front_speed(s.state(), nl, lab.kernel, 0.5, cfg.closure, cfg.epsilon));
      },
      true);
  const double t_burn = 0.5 * opt.t_run;
  const double t_tail = t_burn + 0.5 * (opt.t_run - t_burn);
  std::size_t ib = 0;
  while (ib < ts.size() && ts[ib] < t_burn - 1e-9) ++ib;
  const double Xb = xs[ib];
  std::vector<double> at, av;
  double amin = kInf, amax = -kInf;
  double integral = 0.0;
  for (std::size_t i = ib + 1; i < ts.size(); ++i) {
    const double a = (xs[i] - Xb) / (ts[i] - t_burn);
    integral += 0.5 * (vs[i] + vs[i - 1]) * (ts[i] - ts[i - 1]);
    if (ts[i] >= t_tail - 1e-9) {
      amin = std::min(amin, a);
      amax = std::max(amax, a);
    }
    if (std::abs(std::remainder(ts[i], 1.0)) < 1e-9) {
      at.push_back(ts[i]);
      av.push_back(a);
    }
  }
  const double slope = (xs.back() - Xb) / (ts.back() - t_burn);
  const double pointwise = integral / (ts.back() - t_burn);
  double wmin = kInf;
  const auto stride = static_cast<std::size_t>(std::lround(opt.window / opt.cadence));
  for (std::size_t i = ib; i + stride < ts.size(); ++i) wmin = std::min(wmin, (xs[i + stride] - xs[i]) / opt.window);
  r.metric("mean_speed") = slope;
  r.metric("pointwise_mean_speed") = pointwise;
  r.metric("oscillation") = (amax - amin) / std::abs(slope);
  r.metric("formula_vs_slope") = std::abs(pointwise - slope) / std::abs(slope);
  r.metric("min_window_speed") = wmin;
  r.metric("min_pointwise_speed") = *std::min_element(vs.begin() + static_cast<long>(ib), vs.end());
  add_series(r, "running_average", at, av);
  {
    std::vector<double> st, sv;
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (std::abs(std::remainder(ts[i], 1.0)) < 1e-9) {
        st.push_back(ts[i]);
        sv.push_back(vs[i]);
      }
    add_series(r, "pointwise_speed", st, sv);
  }
  r.scheme_of["mean_speed"] = to_string(cfg.scheme);
  r.check("running_average_settles", "oscillation", "<", 0.01);
  r.check("formula_matches_slope", "formula_vs_slope", "<", 0.01);
  r.check("window_speeds_positive", "min_window_speed", ">", 0.0);
  if (nl.autonomous()) {
    const TravelingWave w = compute_wave(nl, lab.kernel, cfg, 0.5, lab.t_relax, lab.wave);
    r.metric("wave_speed") = w.speed;
    r.metric("speed_vs_wave") = std::abs(slope - w.speed) / std::abs(w.speed);
    r.check("matches_wave", "speed_vs_wave", "<", 0.005);
  }
  if (const auto path = lab.artifact("speed.csv"); !path.empty()) {
    write_columns_csv(path, {"t", "X", "pointwise_speed"}, {ts, xs, vs});
    r.artifacts.push_back(path);
  }
  return r;
}

// ---------------------------------------------------------------------------

ExperimentReport perturbation_limit(const Lab& lab, const std::vector<double>& eps_list, const FrontOptions& fopt,
                                    double width_ratio) {
  ExperimentReport r;
  r.name = "perturbation_limit";
  r.labels["medium"] = lab.nl.describe();
  if (eps_list.size() < 2) fail(ErrorKind::invalid_argument, "eps_list needs at least two entries");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] >= 0.0)) fail(ErrorKind::invalid_argument, "epsilon values must be nonnegative");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) fail(ErrorKind::invalid_argument, "eps_list must decrease");
  }
  std::vector<std::vector<double>> profiles;
  std::vector<double> widths;
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    const double eps = eps_list[k];
    Lab l = lab;
    l.out_dir.clear();
    l.order_cfg.epsilon = eps;
    l.rate_cfg.epsilon = eps;
    const double lim = monotone_dt_limit(l.nl, eps, l.grid.dx);
    if (l.order_cfg.dt > lim) l.order_cfg.dt = 0.9 * lim;
    const double rk = 2.5 / (1.0 + l.nl.lipschitz() + 4.0 * eps / (l.grid.dx * l.grid.dx));
    if (l.rate_cfg.dt > rk) l.rate_cfg.dt = rk;
    const std::string tag = "_" + std::to_string(k);
    r.parameters["epsilon" + tag] = eps;
    r.parameters["dt" + tag] = l.order_cfg.dt;
    try {
      FrontRun f = construct_front(l, fopt);
      r.metric("accepted" + tag) = f.accepted ? 1.0 : 0.0;
      r.metric("front_last_distance" + tag) = f.report.metric_or("last_distance", kInf);
      r.metric("width" + tag) = f.width;
      if (!f.report.error.empty()) r.notes.push_back("epsilon " + fmt(eps) + ": " + f.report.error);
      for (const auto& c : f.report.criteria)
        if (!c.pass) r.notes.push_back("epsilon " + fmt(eps) + ": front check " + c.name + " failed (" + fmt(c.value) + ")");
      for (std::size_t j = 1; j < fopt.s_list.size(); ++j)
        r.metric("front_distance" + tag + "_" + std::to_string(j)) = f.report.metric_or("distance_" + std::to_string(j), kInf);
      profiles.push_back(f.pinned);
      widths.push_back(f.width);
    } catch (const Error& e) {
      r.notes.push_back("epsilon " + fmt(eps) + ": " + e.what());
      profiles.emplace_back();
      widths.push_back(kInf);
    }
  }
  std::vector<double> dist;
  for (std::size_t k = 1; k < profiles.size(); ++k) {
    const double d = profiles[k].empty() || profiles[k - 1].empty() ? kInf : sup_diff(profiles[k], profiles[k - 1]);
    dist.push_back(d);
    r.metric("distance_" + std::to_string(k - 1) + "_" + std::to_string(k)) = d;
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < dist.size(); ++k) decreasing = decreasing && dist[k] < dist[k - 1];
  const auto [wlo, whi] = std::minmax_element(widths.begin(), widths.end());
  r.metric("width_max") = *whi;
  r.metric("width_ratio") = *whi / *wlo;
  r.require("distances_decrease", decreasing && std::isfinite(dist.back()));
  r.check("uniform_width", "width_ratio", "<=", width_ratio);
  r.scheme_of["distance"] = to_string(lab.order_cfg.scheme);
  return r;
}

// ---------------------------------------------------------------------------

ExperimentReport comparison_experiment(const Lab& lab, const ComparisonOptions& opt) {
  ExperimentReport r;
  r.name = "comparison";
  r.parameters["pairs"] = opt.pairs;
  r.parameters["steps"] = opt.steps;
  r.parameters["n"] = opt.n;
  const auto start = std::chrono::steady_clock::now();
  const Grid1D grid = Grid1D::centered(lab.grid.dx, opt.n);
  std::mt19937_64 rng(lab.seed);
  const Closure closures[] = {Closure::front(), Closure::zero(), Closure::constant(1.0, 1.0)};
  double worst = kInf;
  long violations = 0;
  for (int p = 0; p < opt.pairs; ++p) {
    SolverConfig cfg = frozen(lab.order_cfg);
    cfg.closure = closures[p % 3];
    FieldState a = FieldState::zeros(grid), b = FieldState::zeros(grid);
    const int shape = static_cast<int>(rng() % 3);
    const double x0 = (uniform01(rng) - 0.5) * 0.5 * grid.length();
    const double gap_amp = uniform01(rng);
    for (int i = 0; i < grid.n; ++i) {
      double base;
      if (shape == 0) base = uniform01(rng);
      else if (shape == 1) base = 0.5 * (1.0 - std::tanh((grid.x(i) - x0) / (0.5 + 4.0 * gap_amp)));
      else base = grid.x(i) < x0 ? 1.0 : 0.0;
      a[i] = base;
      b[i] = base + gap_amp * uniform01(rng) * (1.0 - base);
    }
    Evolver ev(lab.nl, lab.kernel, cfg, grid);
    bool bad = false;
    for (int s = 0; s < opt.steps; ++s) {
      ev.step(a);
      ev.step(b);
      for (int i = 0; i < grid.n; ++i) {
        const double g = b[i] - a[i];
        worst = std::min(worst, g);
        if (g < -opt.slack) bad = true;
      }
    }
    if (bad) ++violations;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.metric("worst_gap") = worst;
  r.metric("violations") = static_cast<double>(violations);
  r.metric("runtime_s") = secs;
  r.scheme_of["worst_gap"] = to_string(lab.order_cfg.scheme);
  r.check("order_preserved", "violations", "==", 0.0);
  return r;
}

ExperimentReport equilibria_experiment(const Lab& lab, int steps, double tol) {
  ExperimentReport r;
  r.name = "equilibria";
  r.parameters["steps"] = steps;
  const double dx = lab.grid.dx;
  const Grid1D grid = Grid1D::centered(dx, lab.grid.n);
  double worst = 0.0;
  int cases = 0;
  for (KernelFamily fam : {KernelFamily::gaussian, KernelFamily::uniform, KernelFamily::laplace}) {
    const Kernel k = make_kernel(fam, lab.kernel.scale, dx, 1e-12);
    for (Scheme sc : {Scheme::euler_monotone, Scheme::rk4}) {
      for (double eps : {0.0, 0.05}) {
        for (double c : {0.0, 1.0}) {
          SolverConfig cfg = frozen(lab.order_cfg);
          cfg.scheme = sc;
          cfg.epsilon = eps;
          cfg.dt = std::min(lab.order_cfg.dt, 0.9 * monotone_dt_limit(lab.nl, eps, dx));
          const Closure consistent = c == 0.0 ? Closure::zero() : Closure::constant(1.0, 1.0);
          const std::string tag =
              std::string(to_string(fam)) + "_" + to_string(sc) + (eps > 0.0 ? "_eps" : "") + (c == 0.0 ? "_0" : "_1");
          double dev = 0.0;
          {
            cfg.closure = consistent;
            Evolver ev(lab.nl, k, cfg, grid);
            FieldState s = FieldState::zeros(grid);
            std::fill(s.values.begin(), s.values.end(), c);
            for (int st = 0; st < steps; ++st) {
              ev.step(s);
              for (double v : s.values) dev = std::max(dev, std::abs(v - c));
            }
          }
          {
            // front closure: nodes out of the kernel's reach of the opposite edge
            cfg.closure = Closure::front();
            Evolver ev(lab.nl, k, cfg, grid);
            FieldState s = FieldState::zeros(grid);
            std::fill(s.values.begin(), s.values.end(), c);
            ev.step(s);
            const int reach = (sc == Scheme::rk4 ? 4 : 1) * (k.half_width + 1);
            const int lo = c == 0.0 ? reach : 0;
            const int hi = c == 0.0 ? grid.n : grid.n - reach;
            for (int i = lo; i < hi; ++i) dev = std::max(dev, std::abs(s[i] - c));
          }
          r.metric("deviation_" + tag) = dev;
          worst = std::max(worst, dev);
          ++cases;
        }
      }
    }
  }
  r.metric("max_deviation") = worst;
  r.metric("cases") = cases;
  r.check("fixed", "max_deviation", "<=", tol);
  return r;
}

ExperimentReport kernel_bound_experiment(const Lab& lab, const KernelBoundOptions& opt) {
  ExperimentReport r;
  r.name = "kernel_bound";
  r.parameters["pairs"] = opt.pairs;
  r.parameters["n"] = opt.n;
  r.parameters["dt"] = opt.dt;
  const auto start = std::chrono::steady_clock::now();
  const Nonlinearity& nl = lab.nl;
  const double dx = lab.grid.dx;
  const Grid1D grid = Grid1D::centered(dx, opt.n);
  double t_max = 0.0;
  for (double e : opt.elapsed) t_max = std::max(t_max, e);
  const double K = std::max(0.0, nl.sup_neg_fu(0.0, 1.0, t_max));
  r.metric("K") = K;
  SolverConfig cfg = frozen(lab.order_cfg);
  cfg.scheme = Scheme::euler_monotone;
  cfg.dt = opt.dt;
  cfg.closure = Closure::zero();
  std::mt19937_64 rng(lab.seed ^ 0x9e3779b97f4a7c15ULL);
  long violations = 0, checks = 0;
  double worst = -kInf, tightest = kInf;
  int max_N = 0;
  const Kernel families[] = {lab.kernel, make_kernel(KernelFamily::uniform, lab.kernel.scale, dx, 1e-12)};
  for (const Kernel& kern : families) {
    std::vector<Kernel> powers{kern};
    auto power = [&](int N) -> const Kernel& {
      while (static_cast<int>(powers.size()) < N) powers.push_back(iterate_kernel(kern, static_cast<int>(powers.size()) + 1));
      return powers[static_cast<std::size_t>(N - 1)];
    };
    const double reach_limit = 0.5 * grid.length() - 0.5;
    for (int p = 0; p < opt.pairs; ++p) {
      const double h = 0.2 + 0.6 * uniform01(rng);
      const double sep = 2.0 * uniform01(rng);
      const double room = std::max(0.0, reach_limit - 4.0 * kern.scale - h - sep);
      const double z = (2.0 * uniform01(rng) - 1.0) * 0.5 * room;
      const double x = z + (rng() % 2 ? sep : -sep);
      const int iz = static_cast<int>(std::lround((z - grid.x_left) / dx));
      const int ix = static_cast<int>(std::lround((x - grid.x_left) / dx));
      std::vector<int> nodes;
      for (int i = 0; i < grid.n; ++i)
        if (std::abs(grid.x(i) - grid.x(iz)) <= h + 1e-9) nodes.push_back(i);

      // smallest N with J^N positive at every offset x - y, y in [z - h, z + h]
      int N = 1;
      double c_tilde = 0.0;
      for (;; ++N) {
        if (N > 40) fail(ErrorKind::resource, "iterated kernel stays degenerate");
        const Kernel& J = power(N);
        double m = kInf;
        for (int i : nodes) {
          const int a = std::abs(ix - i);
          m = std::min(m, a <= J.half_width ? J.weight(a) : 0.0);
        }
        if (m > 0.0) {
          c_tilde = m;
          break;
        }
      }
      max_N = std::max(max_N, N);

      FieldState u1 = FieldState::zeros(grid), u2 = FieldState::zeros(grid);
      for (int i = 0; i < grid.n; ++i) {
        u1[i] = uniform01(rng);
        u2[i] = u1[i] + uniform01(rng) * (1.0 - u1[i]);
      }
      double integral = 0.0;
      for (int i : nodes) integral += (u1[i] - u2[i]) * dx;
      Simulation sim(nl, kern, cfg, {u1, u2});
      for (double tau : opt.elapsed) {
        sim.advance_to(tau);
        const double lhs = sim.state(0)[ix] - sim.state(1)[ix];
        const double bound = c_tilde * std::exp(-(1.0 + K) * tau) * std::pow(tau / N, N) * integral;
        ++checks;
        worst = std::max(worst, lhs - bound);
        if (bound < 0.0) tightest = std::min(tightest, lhs / bound);
        if (lhs > bound + opt.slack) ++violations;
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.metric("checks") = static_cast<double>(checks);
  r.metric("violations") = static_cast<double>(violations);
  r.metric("worst_excess") = worst;
  r.metric("min_ratio") = tightest;
  r.metric("max_power") = max_N;
  r.metric("runtime_s") = secs;
  r.scheme_of["worst_excess"] = to_string(cfg.scheme);
  r.check("bound_holds", "violations", "==", 0.0);
  return r;
}

// ---------------------------------------------------------------------------

ExperimentReport wave_experiment(const Lab& lab, const WaveCheckOptions& opt) {
  ExperimentReport r;
  r.name = "wave";
  r.labels["medium"] = lab.nl.describe();
  r.parameters["advect"] = opt.advect;
  const Nonlinearity& nl = lab.nl;
  const SolverConfig& cfg = lab.rate_cfg;
  const TravelingWave w = compute_wave(nl, lab.kernel, cfg, 0.5, lab.t_relax, lab.wave);
  WaveOptions alt = lab.wave;
  alt.init_width = opt.init_width;
  const TravelingWave w2 = compute_wave(nl, lab.kernel, cfg, 0.5, lab.t_relax, alt);
  r.metric("speed") = w.speed;
  r.metric("speed_alt_init") = w2.speed;
  r.metric("trailing_change") = w.trailing_change;
  r.metric("relax_time") = w.relax_time;
  r.metric("max_increase") = w.max_increase;
  r.metric("integral_f") = reaction_integral(nl);
  r.metric("init_agreement") = optimal_shift(w.profile, w2.profile, w.grid).distance;

  const Grid1D g = Grid1D::centered(lab.grid.dx, w.grid.n);
  Simulation sim(nl, lab.kernel, frozen(cfg), {w.place(g, 0.0)});
  sim.advance_to(opt.advect);
  const FieldState target = w.place(g, w.speed * opt.advect);
  r.metric("advect_error") = sup_diff(sim.state().values, target.values);
  r.scheme_of["speed"] = to_string(cfg.scheme);
  r.check("advects", "advect_error", "<", opt.advect_tol);
  r.check("initialization_independent", "init_agreement", "<", opt.agree_tol);
  r.check("monotone", "max_increase", "<=", 1e-10);
  if (const auto path = lab.artifact("wave.csv"); !path.empty()) {
    std::vector<double> xs;
    for (int i = 0; i < w.grid.n; ++i) xs.push_back(w.grid.x(i));
    write_columns_csv(path, {"x", "phi"}, {xs, w.profile});
    r.artifacts.push_back(path);
  }
  return r;
}

std::vector<std::string> experiment_names() {
  return {"wave",       "front",      "steepness",   "stability",        "subsolution",
          "squeezing",  "decay",      "uniqueness",  "periodicity",      "asymptotic_speed",
          "perturbation_limit", "comparison", "equilibria", "kernel_bound"};
}

}  // namespace frontlab
