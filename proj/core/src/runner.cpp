#include "frontlab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <thread>

#include "frontlab/csv.hpp"
#include "frontlab/fronts.hpp"
#include "frontlab/theorems.hpp"

namespace frontlab {

namespace {

bool needs_front(const std::string& name) {
  return name == "front" || name == "steepness" || name == "stability" || name == "squeezing" || name == "decay" ||
         name == "periodicity";
}

FrontOptions front_options(const RunConfig& cfg) {
  FrontOptions f;
  f.s_list = cfg.numbers("s_list", f.s_list);
  f.t_probe = cfg.number("t_probe", f.t_probe);
  f.pin_theta = cfg.number("pin_theta", f.pin_theta);
  return f;
}

/// Empty when the experiment applies to this medium.
std::string inapplicable(const std::string& name, const Nonlinearity& nl) {
  const SignalKind k = nl.signal().kind;
  if ((name == "wave" || name == "subsolution") && !nl.autonomous()) return "needs a time-constant medium";
  if (name == "periodicity" && !nl.autonomous() && k != SignalKind::periodic) return "needs a periodic medium";
  return {};
}

ExperimentReport dispatch(const std::string& name, const RunConfig& cfg, Lab& lab) {
  if (!inapplicable(name, lab.nl).empty()) {
    ExperimentReport r;
    r.name = name;
    r.skipped = true;
    r.skip_reason = inapplicable(name, lab.nl);
    return r;
  }
  FrontRun front;
  if (needs_front(name)) {
    Lab quiet = lab;
    if (name != "front") quiet.out_dir.clear();
    front = construct_front(quiet, front_options(cfg));
    if (name == "front") return front.report;
    if (!front.report.error.empty()) {
      ExperimentReport r;
      r.name = name;
      r.error = "front construction failed: " + front.report.error;
      return r;
    }
  }
  if (name == "wave") {
    WaveCheckOptions o;
    o.advect = cfg.number("advect", o.advect);
    o.init_width = cfg.number("init_width", o.init_width);
    return wave_experiment(lab, o);
  }
  if (name == "steepness") {
    SteepnessOptions o;
    o.M = cfg.number("M", o.M);
    o.periods = cfg.number("periods", o.periods);
    o.sample = cfg.number("sample", o.sample);
    o.threshold = cfg.number("threshold", o.threshold);
    return steepness_experiment(lab, front, o);
  }
  if (name == "stability") {
    Perturbation p;
    p.kind = parse_perturbation(cfg.text("perturbation", "bump"));
    p.amplitude = cfg.number("amplitude", p.amplitude);
    p.shift = cfg.number("shift", p.shift);
    p.width = cfg.number("width", p.width);
    p.seed = lab.seed;
    return stability_experiment(lab, front, p, cfg.number("t_run", 60.0), cfg.number("sample", 0.5));
  }
  if (name == "subsolution") {
    ResidualOptions o;
    o.t_run = cfg.number("t_run", o.t_run);
    o.mu = cfg.number("mu", o.mu);
    return subsolution_residual(lab, o);
  }
  if (name == "squeezing") {
    SqueezeOptions o;
    o.shift = cfg.number("shift", o.shift);
    o.bump = cfg.number("bump", o.bump);
    o.delta_hat = cfg.number("delta_hat", o.delta_hat);
    o.t_run = cfg.number("t_run", o.t_run);
    o.sample = cfg.number("sample", o.sample);
    return squeezing_diagnostic(lab, front, o);
  }
  if (name == "decay") {
    DecayOptions o;
    o.theta2 = cfg.number("theta2", o.theta2);
    o.h = cfg.number("h", o.h);
    o.t0_list = cfg.numbers("t0_list", o.t0_list);
    o.t_end = cfg.number("t_end", o.t_end);
    return decay_experiment(lab, front, o);
  }
  if (name == "uniqueness") {
    InitialDatum a, b;
    a.kind = parse_initial_datum(cfg.text("init_a", "step"));
    b.kind = parse_initial_datum(cfg.text("init_b", "smooth_step"));
    a.width = b.width = cfg.number("width", 2.0);
    return uniqueness_experiment(lab, a, b, cfg.number("t_run", 80.0), cfg.number("sample", 0.5));
  }
  if (name == "periodicity") {
    PeriodicityOptions o;
    o.n_periods = static_cast<int>(cfg.number("n_periods", o.n_periods));
    o.level = cfg.number("level", o.level);
    o.phases = static_cast<int>(cfg.number("phases", o.phases));
    o.period = cfg.number("period", o.period);
    return periodicity_experiment(lab, front, o);
  }
  if (name == "asymptotic_speed") {
    AsymptoticOptions o;
    o.t_run = cfg.number("t_run", o.t_run);
    o.cadence = cfg.number("cadence", o.cadence);
    o.window = cfg.number("window", o.window);
    return asymptotic_speed_experiment(lab, o);
  }
  if (name == "perturbation_limit")
    return perturbation_limit(lab, cfg.numbers("eps_list", {0.1, 0.01, 0.0}), front_options(cfg),
                              cfg.number("width_ratio", 2.0));
  if (name == "comparison") {
    ComparisonOptions o;
    o.pairs = static_cast<int>(cfg.number("pairs", o.pairs));
    o.steps = static_cast<int>(cfg.number("steps", o.steps));
    o.n = static_cast<int>(cfg.number("n", o.n));
    return comparison_experiment(lab, o);
  }
  if (name == "equilibria") return equilibria_experiment(lab, static_cast<int>(cfg.number("steps", 20)));
  if (name == "kernel_bound") {
    KernelBoundOptions o;
    o.pairs = static_cast<int>(cfg.number("pairs", o.pairs));
    o.n = static_cast<int>(cfg.number("n", o.n));
    o.dt = cfg.number("dt", o.dt);
    return kernel_bound_experiment(lab, o);
  }
  fail(ErrorKind::invalid_argument, "unknown experiment '" + name + "'");
}

void finish(const ExperimentReport& r, const std::string& dir, std::ostream& log) {
  r.write(dir);
  log << (r.skipped ? "SKIP " : (r.pass() ? "PASS " : "FAIL ")) << r.name;
  if (r.skipped) log << " (" << r.skip_reason << ")";
  if (!r.error.empty()) log << " (" << r.error << ")";
  log << '\n';
  for (const auto& c : r.criteria)
    log << "  " << (c.pass ? "ok   " : "FAIL ") << c.name << ": " << c.metric << " = " << format_real(c.value) << ' '
        << c.op << ' ' << format_real(c.threshold) << '\n';
}

ExperimentReport validate_report(const RunConfig& cfg) {
  ExperimentReport r;
  r.name = "validate";
  const Nonlinearity nl = cfg.nonlinearity();
  r.labels["medium"] = nl.describe();
  const HypothesisReport h = validate_hypotheses(nl);
  r.metric("beta0") = nl.beta0();
  r.metric("beta1") = nl.beta1();
  r.metric("theta_lo") = nl.theta_lo();
  r.metric("theta_hi") = nl.theta_hi();
  r.metric("lipschitz") = nl.lipschitz();
  for (const auto& c : h.checks) {
    for (const auto& [k, v] : c.witnesses) r.metric(c.name + "." + k) = v;
    if (!c.note.empty()) r.notes.push_back(c.name + ": " + c.note);
    if (c.status == "pending" || c.status == "not_applicable") {
      r.notes.push_back(c.name + ": " + c.status);
      continue;
    }
    r.require(c.name, c.pass);
  }
  return r;
}

ExperimentReport wave_report(const RunConfig& cfg) {
  Lab lab = cfg.lab();
  ExperimentReport r;
  r.name = "wave";
  r.labels["medium"] = lab.nl.describe();
  SolverConfig sc = cfg.scheme == Scheme::rk4 ? lab.rate_cfg : lab.order_cfg;
  const UnbalancedCheck u = check_unbalanced(lab.nl, lab.kernel, sc, lab.t_relax, lab.wave);
  r.metric("speed_fB") = u.speed_fB;
  r.metric("integral_fB") = u.integral_fB;
  r.metric("theta_B") = u.theta_B;
  r.require("unbalanced", u.pass);
  if (u.unresolved_sign) r.notes.push_back("wave speed below the resolution floor; sign unresolved");
  const TravelingWave& w = u.wave;
  if (lab.nl.autonomous()) {
    const TravelingWave own = compute_wave(lab.nl, lab.kernel, sc, 0.5, lab.t_relax, lab.wave);
    r.metric("speed") = own.speed;
    r.metric("trailing_change") = own.trailing_change;
  }
  r.scheme_of["speed_fB"] = to_string(sc.scheme);
  if (const auto path = lab.artifact("wave.csv"); !path.empty()) {
    std::vector<double> xs;
    for (int i = 0; i < w.grid.n; ++i) xs.push_back(w.grid.x(i));
    write_columns_csv(path, {"x", "phi"}, {xs, w.profile});
    r.artifacts.push_back(path);
  }
  return r;
}

ExperimentReport simulate_report(const RunConfig& cfg) {
  Lab lab = cfg.lab();
  ExperimentReport r;
  r.name = "simulate";
  r.labels["medium"] = lab.nl.describe();
  const SolverConfig sc = cfg.scheme == Scheme::rk4 ? lab.rate_cfg : lab.order_cfg;
  InitialDatum d;
  d.kind = parse_initial_datum(cfg.text("init", "step"));
  d.width = cfg.number("width", d.width);
  const double t_end = cfg.number("t_end", 50.0);
  Observer snaps;
  snaps.kind = Observer::Kind::snapshot;
  snaps.cadence = cfg.cadence;
  Observer track;
  track.kind = Observer::Kind::interface;
  track.cadence = cfg.cadence;
  track.levels = cfg.numbers("levels", {0.05, 0.5, 0.95});
  auto [final_state, rec] = evolve_to(d.build(lab.grid), lab.nl, lab.kernel, sc, t_end, {snaps, track});
  rec.track.fit_speeds(0.5 * t_end);
  r.metric("t_end") = final_state.t;
  r.metric("X_end") = interface_locations(final_state, 0.5).x_minus;
  for (std::size_t k = 0; k < rec.track.levels.size(); ++k)
    r.metric("speed_level_" + format_real(rec.track.levels[k])) = rec.track.speeds[k];
  r.metric("recenter_events") = static_cast<double>(rec.recenter_events);
  r.scheme_of["speed"] = to_string(sc.scheme);
  const std::string snap = lab.artifact("snapshots.csv");
  const std::string trk = lab.artifact("track.csv");
  write_snapshots_csv(snap, rec.snapshots);
  write_track_csv(trk, rec.track);
  r.artifacts = {snap, trk};
  return r;
}

}  // namespace

ExperimentReport run_experiment(const std::string& name, const RunConfig& cfg, const std::string& out_dir) {
  RunConfig c = cfg;
  c.directory = out_dir;
  Lab lab = c.lab();
  lab.order_cfg.dump_dir = out_dir;
  lab.rate_cfg.dump_dir = out_dir;
  try {
    ExperimentReport r = dispatch(name, c, lab);
    r.parameters["seed"] = static_cast<double>(c.seed);
    return r;
  } catch (const std::exception& e) {
    ExperimentReport r;
    r.name = name;
    r.error = e.what();
    return r;
  }
}

int run_command(const std::string& sub, const std::string& experiment, RunConfig cfg, const RunOptions& opt,
                std::ostream& log) {
  if (!opt.out_dir.empty()) cfg.directory = opt.out_dir;
  if (opt.seed) cfg.seed = *opt.seed;
  const std::string root = cfg.directory;
  write_effective_config(cfg, root);

  auto guarded = [&](const std::string& name, auto&& body) {
    ExperimentReport r;
    try {
      r = body();
    } catch (const std::exception& e) {
      r.name = name;
      r.error = e.what();
    }
    finish(r, root, log);
    return r.pass() ? 0 : 1;
  };

  if (sub == "validate") return guarded("validate", [&] { return validate_report(cfg); });
  if (sub == "wave") return guarded("wave", [&] { return wave_report(cfg); });
  if (sub == "simulate") return guarded("simulate", [&] { return simulate_report(cfg); });
  if (sub == "experiment") {
    const std::string name = experiment.empty() ? cfg.experiment : experiment;
    if (name.empty()) {
      log << "no experiment named on the command line or in [experiment] name\n";
      return 2;
    }
    const ExperimentReport r = run_experiment(name, cfg, root);
    finish(r, root, log);
    return r.pass() ? 0 : 1;
  }
  if (sub == "suite") {
    nlohmann::ordered_json summary;
    summary["medium"] = cfg.nonlinearity().describe();
    const std::vector<std::string> names = experiment_names();
    std::vector<ExperimentReport> reports(names.size());

    Lab lab = cfg.lab();
    std::string gate_failure;
    try {
      const UnbalancedCheck u = check_unbalanced(lab.nl, lab.kernel, lab.order_cfg, lab.t_relax, lab.wave);
      summary["speed_fB"] = u.speed_fB;
      if (!u.pass)
        gate_failure = "bounding reaction is not unbalanced (speed " + format_real(u.speed_fB) + ")";
    } catch (const std::exception& e) {
      gate_failure = std::string("unbalanced check failed: ") + e.what();
    }
    summary["gate"] = gate_failure.empty() ? "pass" : gate_failure;

    if (!gate_failure.empty()) {
      for (std::size_t i = 0; i < names.size(); ++i) {
        reports[i].name = names[i];
        reports[i].skipped = true;
        reports[i].skip_reason = gate_failure;
      }
    } else {
      std::atomic<std::size_t> next{0};
      const int jobs = std::max(1, opt.jobs);
      auto worker = [&] {
        for (std::size_t i = next++; i < names.size(); i = next++)
          reports[i] = run_experiment(names[i], cfg, root + "/" + names[i]);
      };
      std::vector<std::thread> pool;
      for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
    }

    bool ok = gate_failure.empty();
    auto& list = summary["experiments"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < names.size(); ++i) {
      const ExperimentReport& r = reports[i];
      const std::string dir = root + "/" + names[i];
      finish(r, dir, log);
      const bool not_applicable = r.skipped && gate_failure.empty();
      if (!not_applicable && !r.pass()) ok = false;
      nlohmann::ordered_json e;
      e["name"] = names[i];
      e["pass"] = r.pass();
      if (r.skipped) e["skipped"] = r.skip_reason;
      if (!r.error.empty()) e["error"] = r.error;
      e["report"] = dir + "/report.json";
      list.push_back(e);
    }
    summary["pass"] = ok;
    std::ofstream(root + "/report.json") << summary.dump(2) << '\n';
    log << (ok ? "suite passed\n" : "suite failed\n");
    return ok ? 0 : 1;
  }
  log << "unknown subcommand '" << sub << "'\n";
  return 2;
}

}  // namespace frontlab
