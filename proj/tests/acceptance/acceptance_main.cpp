// One PASS/FAIL line per acceptance criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "frontlab/config.hpp"
#include "frontlab/csv.hpp"
#include "frontlab/runner.hpp"

using namespace frontlab;

namespace {

const char* kPeriodic = "[medium]\nsignal = periodic\ntheta = 0.25\namplitude = 0.05\nperiod = 2\n";
const char* kAutonomous = "[medium]\nsignal = constant\ntheta = 0.25\n";
const char* kQuasi = "[medium]\nsignal = quasiperiodic\ntheta = 0.25\namplitude = 0.03\namplitude2 = 0.03\n";

// steepness margin of the scale-2 periodic front, frozen from a reference run
constexpr double kSteepGolden = -0.029695260371609411;

std::string out_root = "acceptance_out";

struct Outcome {
  bool pass = true;
  std::string detail;
  void add(const std::string& key, double v) { detail += (detail.empty() ? "" : ", ") + key + "=" + fmt(v); }
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
  }
};

ExperimentReport run(const std::string& name, const std::string& ini, const std::string& tag) {
  const RunConfig cfg = parse_config(ini, tag);
  return run_experiment(name, cfg, out_root + "/" + tag);
}

// merges a report into the outcome, naming any failed check
void absorb(Outcome& o, const ExperimentReport& r, const std::string& label = {}) {
  if (!r.error.empty()) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : ", ") + label + "error: " + r.error;
    return;
  }
  if (r.skipped) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : ", ") + label + "skipped: " + r.skip_reason;
    return;
  }
  for (const auto& c : r.criteria)
    if (!c.pass) {
      o.pass = false;
      o.detail += (o.detail.empty() ? "" : ", ") + label + c.name + " failed";
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome c1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run("comparison", std::string(kPeriodic) + "[experiment]\npairs = 200\nsteps = 500\nn = 512\n", "c01");
  const double s = seconds_since(t0);
  absorb(o, r);
  o.add("violations", r.metric_or("violations", -1));
  o.add("worst_gap", r.metric_or("worst_gap", NAN));
  o.add("seconds", s);
  if (s >= 30.0) o.pass = false;
  return o;
}

Outcome c2() {
  Outcome o;
  const auto r = run("equilibria", kPeriodic, "c02");
  absorb(o, r);
  o.add("max_deviation", r.metric_or("max_deviation", NAN));
  o.add("cases", r.metric_or("cases", NAN));
  return o;
}

Outcome c3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run("wave", "[medium]\ntheta = 0.5\n[grid]\ndx = 0.05\nn = 2048\n[solver]\nscheme = rk4\ndt = 0.1\n", "c03");
  const double s = seconds_since(t0);
  const double c = r.metric_or("speed", NAN);
  o.pass = r.error.empty() && std::abs(c) <= 2e-3 && s < 120.0;
  if (!r.error.empty()) o.detail = r.error + ", ";
  o.add("speed", c);
  o.add("seconds", s);
  return o;
}

Outcome c4() {
  Outcome o;
  const auto r = run("wave", std::string(kAutonomous) + "[solver]\nscheme = rk4\n", "c04");
  absorb(o, r);
  o.add("advect_error", r.metric_or("advect_error", NAN));
  o.add("init_agreement", r.metric_or("init_agreement", NAN));
  o.add("speed", r.metric_or("speed", NAN));
  return o;
}

Outcome c5() {
  Outcome o;
  const auto r = run("subsolution", kAutonomous, "c05");
  absorb(o, r);
  o.add("sub_max", r.metric_or("sub_residual_max", NAN));
  o.add("neg_super_min", r.metric_or("neg_super_residual_min", NAN));
  o.add("tolerance", r.metric_or("tolerance", NAN));
  return o;
}

Outcome c6() {
  Outcome o;
  const auto r = run("steepness", std::string(kPeriodic) + "[kernel]\nscale = 2\n[experiment]\nM = 5\nperiods = 20\nsample = 0.5\n", "c06");
  absorb(o, r);
  const double m = r.metric_or("max_ux", NAN);
  o.add("max_ux", m);
  o.add("golden", kSteepGolden);
  if (!(m <= 0.8 * kSteepGolden && m >= 1.2 * kSteepGolden)) {
    o.pass = false;
    o.detail += ", outside golden band";
  }
  return o;
}

Outcome c7() {
  Outcome o;
  const auto r = run("stability", std::string(kPeriodic) + "[experiment]\nperturbation = bump\nt_run = 60\n", "c07");
  absorb(o, r);
  o.add("omega_fit", r.metric_or("omega_fit", NAN));
  o.add("d_end", r.metric_or("d_end", NAN));
  o.add("envelope_violations", r.metric_or("envelope_violations", NAN));
  return o;
}

Outcome c8() {
  Outcome o;
  const auto r = run("squeezing", kPeriodic, "c08");
  absorb(o, r);
  o.add("q", r.metric_or("q", NAN));
  return o;
}

Outcome c9() {
  Outcome o;
  const auto p = run("decay", kPeriodic, "c09_periodic");
  const auto a = run("decay", kAutonomous, "c09_autonomous");
  absorb(o, p, "periodic ");
  absorb(o, a, "autonomous ");
  o.add("c_plus", p.metric_or("c_plus_min", NAN));
  o.add("c_minus", p.metric_or("c_minus_min", NAN));
  o.add("spread_plus", p.metric_or("c_plus_spread", NAN));
  o.add("spread_minus", p.metric_or("c_minus_spread", NAN));
  o.add("vs_wave_plus", a.metric_or("c_plus_vs_wave", NAN));
  o.add("vs_wave_minus", a.metric_or("c_minus_vs_wave", NAN));
  return o;
}

Outcome c10() {
  Outcome o;
  const auto r = run("uniqueness", std::string(kPeriodic) + "[experiment]\ninit_a = step\ninit_b = smooth_step\nt_run = 80\n", "c10");
  absorb(o, r);
  o.add("d_end", r.metric_or("d_end", NAN));
  o.add("xi_spread", r.metric_or("xi_trailing_spread", NAN));
  return o;
}

Outcome c11() {
  Outcome o;
  const auto p = run("periodicity", kPeriodic, "c11_periodic");
  const auto a = run("periodicity", std::string(kAutonomous) + "[experiment]\nperiod = 2\n", "c11_autonomous");
  absorb(o, p, "periodic ");
  absorb(o, a, "autonomous ");
  o.add("c", p.metric_or("c", NAN));
  o.add("c_spread", p.metric_or("c_spread", NAN));
  o.add("m_max", p.metric_or("m_max", NAN));
  o.add("c_vs_wave", a.metric_or("c_vs_wave", NAN));
  return o;
}

Outcome c12() {
  Outcome o;
  const auto r = run("asymptotic_speed", std::string(kQuasi) + "[experiment]\nt_run = 400\n", "c12");
  absorb(o, r);
  o.add("oscillation", r.metric_or("oscillation", NAN));
  o.add("formula_vs_slope", r.metric_or("formula_vs_slope", NAN));
  o.add("mean_speed", r.metric_or("mean_speed", NAN));
  return o;
}

Outcome c13() {
  Outcome o;
  const auto r = run("perturbation_limit", std::string(kAutonomous) + "[experiment]\neps_list = 0.1, 0.01, 0\n", "c13");
  absorb(o, r);
  o.add("d_0.1_0.01", r.metric_or("distance_0_1", NAN));
  o.add("d_0.01_0", r.metric_or("distance_1_2", NAN));
  o.add("width_ratio", r.metric_or("width_ratio", NAN));
  return o;
}

Outcome c14() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run("kernel_bound", std::string(kPeriodic) + "[experiment]\npairs = 50\nn = 128\n", "c14");
  const double s = seconds_since(t0);
  absorb(o, r);
  o.add("violations", r.metric_or("violations", NAN));
  o.add("min_ratio", r.metric_or("min_ratio", NAN));
  o.add("seconds", s);
  if (s >= 60.0) o.pass = false;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) out_root = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"discrete comparison principle", c1},
      {"equilibria exactness", c2},
      {"balanced symmetric speed", c3},
      {"traveling wave self-consistency", c4},
      {"sub- and supersolution residual", c5},
      {"uniform steepness", c6},
      {"exponential stability", c7},
      {"squeezing contraction", c8},
      {"decay exponents", c9},
      {"uniqueness", c10},
      {"periodic traveling wave", c11},
      {"asymptotic speed", c12},
      {"perturbation limit", c13},
      {"iterated kernel bound", c14},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << (i + 1) << ' ' << criteria[i].first << " (" << o.detail << ")"
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << '/' << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
