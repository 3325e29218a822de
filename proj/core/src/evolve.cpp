#include "frontlab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "frontlab/csv.hpp"
#include "frontlab/error.hpp"

namespace frontlab {

const char* to_string(Scheme s) { return s == Scheme::rk4 ? "rk4" : "euler_monotone"; }

Scheme parse_scheme(const std::string& name) {
  if (name == "euler_monotone" || name == "euler") return Scheme::euler_monotone;
  if (name == "rk4") return Scheme::rk4;
  fail(ErrorKind::invalid_argument, "unknown scheme '" + name + "'");
}

double monotone_number(const SolverConfig& cfg, const Nonlinearity& nl, double dx) {
  return cfg.dt * (1.0 + nl.lipschitz() + 2.0 * cfg.epsilon / (dx * dx));
}

double monotone_dt_limit(const Nonlinearity& nl, double epsilon, double dx) {
  return 1.0 / (1.0 + nl.lipschitz() + 2.0 * epsilon / (dx * dx));
}

void validate_solver_config(const SolverConfig& cfg, const Nonlinearity& nl, const Grid1D& grid) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) fail(ErrorKind::configuration, "dt must be positive");
  if (!(cfg.epsilon >= 0.0)) fail(ErrorKind::configuration, "epsilon must be nonnegative");
  if (cfg.recenter && !(cfg.recenter_level > 0.0 && cfg.recenter_level < 1.0))
    fail(ErrorKind::configuration, "recenter_level must lie in (0,1)");
  if (cfg.scheme == Scheme::euler_monotone) {
    const double q = monotone_number(cfg, nl, grid.dx);
    if (q > 1.0) {
      std::ostringstream os;
      os.precision(6);
      os << "euler_monotone needs dt*(1 + L_f + 2*eps/dx^2) <= 1 with L_f = " << nl.lipschitz() << "; got " << q
         << ", so dt must be <= " << monotone_dt_limit(nl, cfg.epsilon, grid.dx);
      fail(ErrorKind::configuration, os.str());
    }
  }
}

Evolver::Evolver(const Nonlinearity& nl, const Kernel& kernel, const SolverConfig& cfg, const Grid1D& grid)
    : nl_(nl), cfg_(cfg), n_(grid.n), dx_(grid.dx), conv_(kernel, grid.n) {
  if (std::abs(kernel.dx - grid.dx) > 1e-14 * grid.dx)
    fail(ErrorKind::inconsistent_discretization, "kernel dx differs from grid dx");
  validate_solver_config(cfg, nl, grid);
  const auto n = static_cast<std::size_t>(n_);
  k1_.resize(n);
  tmp_.resize(n);
  if (cfg.scheme == Scheme::rk4) {
    k2_.resize(n);
    k3_.resize(n);
    k4_.resize(n);
  }
}

void Evolver::rhs(double t, std::span<const double> u, std::span<double> out) {
  conv_.apply(u, cfg_.closure, out);
  const auto frame = nl_.frame(t);
  const int n = n_;
  for (int i = 0; i < n; ++i) {
    const double ui = u[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] += frame.f(ui) - ui;
  }
  if (cfg_.epsilon > 0.0) {
    const double left = cfg_.closure.kind == ClosureKind::zero ? 0.0 : cfg_.closure.left;
    const double right = cfg_.closure.kind == ClosureKind::zero ? 0.0 : cfg_.closure.right;
    const double c = cfg_.epsilon / (dx_ * dx_);
    for (int i = 0; i < n; ++i) {
      const double um = i > 0 ? u[static_cast<std::size_t>(i - 1)] : left;
      const double up = i + 1 < n ? u[static_cast<std::size_t>(i + 1)] : right;
      out[static_cast<std::size_t>(i)] += c * (up - 2.0 * u[static_cast<std::size_t>(i)] + um);
    }
  }
}

void Evolver::step(FieldState& s, double h) {
  if (s.grid.n != n_) fail(ErrorKind::invalid_argument, "state size differs from the evolver window");
  auto& u = s.values;
  const std::size_t n = u.size();
  if (cfg_.scheme == Scheme::euler_monotone) {
    rhs(s.t, u, k1_);
    for (std::size_t i = 0; i < n; ++i) u[i] += h * k1_[i];
  } else {
    rhs(s.t, u, k1_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = u[i] + 0.5 * h * k1_[i];
    rhs(s.t + 0.5 * h, tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = u[i] + 0.5 * h * k2_[i];
    rhs(s.t + 0.5 * h, tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = u[i] + h * k3_[i];
    rhs(s.t + h, tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i) u[i] += h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }
  s.t += h;
}

FieldState step(const FieldState& state, const Nonlinearity& nl, const Kernel& kernel, const SolverConfig& cfg) {
  Evolver ev(nl, kernel, cfg, state.grid);
  FieldState out = state;
  ev.step(out);
  return out;
}

void translate_cells(FieldState& state, long k, const Closure& closure) {
  if (k == 0) return;
  const long n = state.grid.n;
  const double left = closure.kind == ClosureKind::zero ? 0.0 : closure.left;
  const double right = closure.kind == ClosureKind::zero ? 0.0 : closure.right;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const long j = i + k;
    out[static_cast<std::size_t>(i)] = j < 0 ? left : (j >= n ? right : state.values[static_cast<std::size_t>(j)]);
  }
  state.values = std::move(out);
  state.grid.shift_cells += k;
}

long recenter(FieldState& state, double level, double target, const Closure& closure) {
  const Crossing c = interface_locations_window(state.values, state.grid, level);
  const long k = std::lround((c.x_minus - target) / state.grid.dx);
  translate_cells(state, k, closure);
  return k;
}

Simulation::Simulation(const Nonlinearity& nl, const Kernel& kernel, const SolverConfig& cfg,
                       std::vector<FieldState> states, int reference)
    : evolver_(nl, kernel, cfg, states.at(0).grid), states_(std::move(states)), reference_(reference) {
  for (const auto& s : states_)
    if (!s.grid.same_lattice(states_.front().grid) || s.t != states_.front().t)
      fail(ErrorKind::invalid_argument, "lockstep fields must share window and time");
}

void Simulation::maybe_recenter() {
  const SolverConfig& cfg = evolver_.config();
  if (!cfg.recenter) return;
  FieldState& ref = states_[static_cast<std::size_t>(reference_)];
  const Grid1D& g = ref.grid;
  const double band = cfg.recenter_band > 0.0 ? cfg.recenter_band : g.length() / 16.0;
  const double X = interface_locations_window(ref.values, g, cfg.recenter_level).x_minus;
  if (std::abs(X - cfg.recenter_target) <= band) return;
  const long k = std::lround((X - cfg.recenter_target) / g.dx);
  for (auto& s : states_) translate_cells(s, k, cfg.closure);
  ++recenter_events_;
}

void Simulation::substep(double h) {
  previous_ = states_;
  for (auto& s : states_) evolver_.step(s, h);
  for (std::size_t k = 0; k < states_.size(); ++k) {
    const auto& v = states_[k].values;
    if (std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); })) continue;
    const std::string& dir = evolver_.config().dump_dir;
    std::string where = "no dump directory configured";
    if (!dir.empty()) {
      std::filesystem::create_directories(dir);
      write_snapshots_csv(dir + "/nan_dump.csv", {previous_[k], states_[k]});
      where = "last two snapshots written to " + dir + "/nan_dump.csv";
    }
    std::ostringstream os;
    os << "non-finite value at t = " << states_[k].t << " in field " << k << "; " << where;
    fail(ErrorKind::numerical, os.str());
  }
}

void Simulation::advance_to(double t_end, double cadence, const Callback& cb, bool include_start) {
  double t = this->t();
  if (!(t_end >= t)) fail(ErrorKind::invalid_argument, "advance_to needs t_end >= t");
  if (t_end == t) return;
  const double dt = evolver_.config().dt;
  if (include_start && cb) cb(*this);
  const bool events = cadence > 0.0 && cb;
  long k = events ? static_cast<long>(std::floor(t / cadence + 1e-9)) + 1 : 0;
  const double tol = 1e-9 * dt;
  while (t < t_end - tol) {
    const double next_event = events ? std::min(t_end, static_cast<double>(k) * cadence) : t_end;
    while (t < next_event - tol) {
      const double gap = next_event - t;
      if (gap <= dt * (1.0 + 1e-9)) {
        substep(gap);
        for (auto& s : states_) s.t = next_event;
      } else {
        substep(dt);
      }
      t = this->t();
      maybe_recenter();
    }
    for (auto& s : states_) s.t = next_event;
    t = next_event;
    if (events && std::abs(next_event - static_cast<double>(k) * cadence) <= tol) {
      cb(*this);
      ++k;
    }
  }
}

std::pair<FieldState, Records> evolve_to(const FieldState& state, const Nonlinearity& nl, const Kernel& kernel,
                                         const SolverConfig& cfg, double t_end,
                                         const std::vector<Observer>& observers) {
  Records rec;
  if (!(t_end >= state.t)) fail(ErrorKind::invalid_argument, "evolve_to needs t_end >= state.t");
  if (t_end == state.t) return {state, rec};

  std::vector<double> levels;
  for (const auto& o : observers)
    if (o.kind == Observer::Kind::interface) levels.insert(levels.end(), o.levels.begin(), o.levels.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  rec.track = InterfaceTrack(levels);

  // common cadence grid: every observer fires on multiples of its own cadence
  double base = 0.0;
  for (const auto& o : observers) {
    if (!(o.cadence > 0.0)) fail(ErrorKind::invalid_argument, "observer cadence must be positive");
    base = base == 0.0 ? o.cadence : std::min(base, o.cadence);
  }
  Simulation sim(nl, kernel, cfg, {state});
  auto fire = [&](const Simulation& s, bool at_start) {
    const FieldState& st = s.state();
    for (const auto& o : observers) {
      if (at_start && !o.include_start) continue;
      const double q = st.t / o.cadence;
      if (!at_start && std::abs(q - std::round(q)) > 1e-7) continue;
      switch (o.kind) {
        case Observer::Kind::snapshot: rec.snapshots.push_back(st); break;
        case Observer::Kind::interface: rec.track.record(st); break;
        case Observer::Kind::callback:
          if (o.callback) o.callback(st);
          break;
      }
    }
  };
  if (!observers.empty()) fire(sim, true);
  sim.advance_to(t_end, base, observers.empty() ? Simulation::Callback{} : [&](const Simulation& s) { fire(s, false); });
  rec.recenter_events = sim.recenter_events();
  return {sim.state(), std::move(rec)};
}

ResidualField residual(const std::vector<FieldState>& samples, const Nonlinearity& nl, const Kernel& kernel,
                       const SolverConfig& cfg) {
  if (samples.size() < 3) fail(ErrorKind::invalid_argument, "residual needs at least three time samples");
  const Grid1D& g = samples.front().grid;
  for (const auto& s : samples)
    if (!s.grid.same_lattice(g)) fail(ErrorKind::invalid_argument, "residual samples must share one window");
  const double step0 = samples[1].t - samples[0].t;
  if (!(step0 > 0.0)) fail(ErrorKind::invalid_argument, "residual samples must increase in time");
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (std::abs((samples[i].t - samples[i - 1].t) - step0) > 1e-9 * step0)
      fail(ErrorKind::invalid_argument, "residual samples must be equally spaced");
  const int M = std::max(kernel.half_width, 1);
  if (g.n <= 2 * M) fail(ErrorKind::invalid_argument, "window too small for interior residual");

  Convolver conv(kernel, g.n);
  ResidualField r;
  r.first_node = M;
  r.max = -1e300;
  r.min = 1e300;
  std::vector<double> cu(static_cast<std::size_t>(g.n));
  for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
    const auto& u = samples[k].values;
    conv.apply(u, cfg.closure, cu);
    const double inv = 1.0 / (samples[k + 1].t - samples[k - 1].t);
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(g.n - 2 * M));
    for (int i = M; i < g.n - M; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const double ut = (samples[k + 1].values[ii] - samples[k - 1].values[ii]) * inv;
      double rhs = cu[ii] - u[ii] + nl.f(samples[k].t, u[ii]);
      if (cfg.epsilon > 0.0) rhs += cfg.epsilon * (u[ii + 1] - 2.0 * u[ii] + u[ii - 1]) / (g.dx * g.dx);
      const double v = ut - rhs;
      row.push_back(v);
      r.max = std::max(r.max, v);
      r.min = std::min(r.min, v);
      r.max_abs = std::max(r.max_abs, std::abs(v));
    }
    r.times.push_back(samples[k].t);
    r.values.push_back(std::move(row));
  }
  return r;
}

}  // namespace frontlab
