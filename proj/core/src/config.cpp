#include "frontlab/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "frontlab/csv.hpp"

namespace frontlab {

namespace {

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"kernel", {"family", "scale", "trunc_tol"}},
      {"medium", {"family", "signal", "theta", "amplitude", "amplitude2", "period", "freq1", "freq2", "theta0", "theta1"}},
      {"grid", {"dx", "n", "x_left"}},
      {"solver", {"dt", "scheme", "rate_dt", "epsilon", "closure", "t_relax", "wave_tolerance"}},
      {"experiment",
       {"name",       "s_list",    "t_probe",    "pin_theta", "M",        "periods",     "sample",   "threshold",
        "perturbation", "amplitude", "shift",    "width",     "t_run",    "mu",          "bump",     "delta_hat",
        "theta2",     "h",         "t0_list",    "t_end",     "init",     "init_a",      "init_b",   "n_periods",
        "level",      "phases",    "period",     "cadence",   "window",   "eps_list",    "width_ratio", "pairs",
        "steps",      "n",         "dt",         "advect",    "init_width", "levels"}},
      {"output", {"directory", "cadence", "seed"}},
  };
  return keys;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

bool parse_double(const std::string& s, double& out) {
  std::string t = s;
  t.erase(0, t.find_first_not_of(" \t"));
  t.erase(t.find_last_not_of(" \t") + 1);
  if (t.empty()) return false;
  const auto* end = t.data() + t.size();
  auto [p, ec] = std::from_chars(t.data(), end, out);
  return ec == std::errc() && p == end;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) out.push_back(item);
  return out;
}

class Reader {
 public:
  Reader(const boost::property_tree::ptree& tree, std::vector<std::string>& errors) : tree_(tree), errors_(errors) {}

  template <typename Apply>
  void get(const std::string& section, const std::string& key, Apply apply) {
    const auto node = tree_.get_optional<std::string>(boost::property_tree::ptree::path_type(section + "." + key, '.'));
    if (!node) return;
    try {
      apply(*node);
    } catch (const std::exception& e) {
      errors_.push_back(section + "." + key + ": " + e.what());
    }
  }

  void real(const std::string& section, const std::string& key, double& out) {
    get(section, key, [&](const std::string& v) {
      double d = 0.0;
      if (!parse_double(v, d) || !std::isfinite(d)) throw std::invalid_argument("expected a number, got '" + v + "'");
      out = d;
    });
  }

 private:
  const boost::property_tree::ptree& tree_;
  std::vector<std::string>& errors_;
};

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += "\n  " + x;
  return s;
}

}  // namespace

ConfigError::ConfigError(std::string origin, std::vector<std::string> violations)
    : Error(ErrorKind::configuration, origin + ": " + std::to_string(violations.size()) + " problem(s):" + join(violations)),
      violations_(std::move(violations)) {}

std::string nearest_match(const std::string& key, const std::vector<std::string>& candidates) {
  std::string best;
  std::size_t best_d = std::string::npos;
  for (const auto& c : candidates) {
    const std::size_t d = edit_distance(key, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (best_d == std::string::npos || best_d > std::max<std::size_t>(2, key.size() / 2)) return {};
  return best;
}

Nonlinearity RunConfig::nonlinearity() const {
  TimeSignal s;
  switch (signal) {
    case SignalKind::constant: s = TimeSignal::constant(theta); break;
    case SignalKind::periodic: s = TimeSignal::periodic(theta, amplitude, period); break;
    case SignalKind::quasiperiodic:
      s = TimeSignal::quasiperiodic(theta, amplitude, amplitude2);
      s.freq1 = freq1;
      s.freq2 = freq2;
      break;
  }
  return Nonlinearity::cubic(s, theta0, theta1);
}

Lab RunConfig::lab() const {
  Lab lab;
  lab.nl = nonlinearity();
  lab.kernel = make_kernel(kernel_family, kernel_scale, dx, trunc_tol);
  lab.grid = has_x_left ? Grid1D::make(x_left, dx, n) : Grid1D::centered(dx, n);
  lab.order_cfg.dt = dt;
  lab.order_cfg.scheme = scheme;
  lab.order_cfg.epsilon = epsilon;
  lab.order_cfg.closure = closure == "zero" ? Closure::zero() : Closure::front();
  lab.rate_cfg = lab.order_cfg;
  lab.rate_cfg.scheme = Scheme::rk4;
  lab.rate_cfg.dt = rate_dt;
  if (scheme == Scheme::rk4) {
    lab.order_cfg.scheme = Scheme::euler_monotone;
    lab.order_cfg.dt = std::min(dt, 0.9 * monotone_dt_limit(lab.nl, epsilon, dx));
  }
  lab.wave.n = n;
  lab.wave.tolerance = wave_tolerance;
  lab.t_relax = t_relax;
  lab.out_dir = directory;
  lab.seed = seed;
  return lab;
}

double RunConfig::number(const std::string& key, double fallback) const {
  auto it = experiment_keys.find(key);
  if (it == experiment_keys.end()) return fallback;
  double d = 0.0;
  if (!parse_double(it->second, d)) fail(ErrorKind::configuration, "experiment." + key + ": expected a number");
  return d;
}

std::vector<double> RunConfig::numbers(const std::string& key, std::vector<double> fallback) const {
  auto it = experiment_keys.find(key);
  if (it == experiment_keys.end()) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(it->second)) {
    double d = 0.0;
    if (!parse_double(item, d)) fail(ErrorKind::configuration, "experiment." + key + ": expected a list of numbers");
    out.push_back(d);
  }
  return out;
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) const {
  auto it = experiment_keys.find(key);
  return it == experiment_keys.end() ? fallback : it->second;
}

std::string RunConfig::effective() const {
  std::ostringstream os;
  os << "[kernel]\nfamily = " << to_string(kernel_family) << "\nscale = " << format_real(kernel_scale)
     << "\ntrunc_tol = " << format_real(trunc_tol) << "\n\n";
  os << "[medium]\nfamily = cubic\nsignal = " << to_string(signal) << "\ntheta = " << format_real(theta)
     << "\namplitude = " << format_real(amplitude) << "\namplitude2 = " << format_real(amplitude2)
     << "\nperiod = " << format_real(period) << "\nfreq1 = " << format_real(freq1) << "\nfreq2 = " << format_real(freq2)
     << "\ntheta0 = " << format_real(theta0) << "\ntheta1 = " << format_real(theta1) << "\n\n";
  os << "[grid]\ndx = " << format_real(dx) << "\nn = " << n;
  if (has_x_left) os << "\nx_left = " << format_real(x_left);
  os << "\n\n[solver]\ndt = " << format_real(dt) << "\nscheme = " << to_string(scheme)
     << "\nrate_dt = " << format_real(rate_dt) << "\nepsilon = " << format_real(epsilon) << "\nclosure = " << closure
     << "\nt_relax = " << format_real(t_relax) << "\nwave_tolerance = " << format_real(wave_tolerance) << "\n\n";
  os << "[experiment]\n";
  if (!experiment.empty()) os << "name = " << experiment << "\n";
  for (const auto& [k, v] : experiment_keys) os << k << " = " << v << "\n";
  os << "\n[output]\ndirectory = " << directory << "\ncadence = " << format_real(cadence) << "\nseed = " << seed << "\n";
  return os.str();
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  boost::property_tree::ptree tree;
  try {
    std::istringstream is(text);
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(origin, {"line " + std::to_string(e.line()) + ": parse error: " + e.message()});
  }

  std::vector<std::string> errors;
  const auto& keys = known_keys();
  std::vector<std::string> sections;
  for (const auto& [s, _] : keys) sections.push_back(s);
  for (const auto& [section, body] : tree) {
    auto it = keys.find(section);
    if (it == keys.end()) {
      if (body.empty()) {
        errors.push_back("top-level key '" + section + "' outside any section");
        continue;
      }
      std::string msg = "unknown section [" + section + "]";
      if (auto m = nearest_match(section, sections); !m.empty()) msg += "; did you mean [" + m + "]?";
      errors.push_back(msg);
      continue;
    }
    for (const auto& [key, _] : body) {
      if (std::find(it->second.begin(), it->second.end(), key) != it->second.end()) continue;
      std::string msg = "unknown key " + section + "." + key;
      if (auto m = nearest_match(key, it->second); !m.empty()) msg += "; did you mean " + section + "." + m + "?";
      errors.push_back(msg);
    }
  }

  RunConfig c;
  Reader rd(tree, errors);
  rd.get("kernel", "family", [&](const std::string& v) { c.kernel_family = parse_kernel_family(v); });
  rd.real("kernel", "scale", c.kernel_scale);
  rd.real("kernel", "trunc_tol", c.trunc_tol);
  rd.get("medium", "family", [&](const std::string& v) {
    if (v != "cubic") throw std::invalid_argument("only the cubic family is configurable, got '" + v + "'");
  });
  rd.get("medium", "signal", [&](const std::string& v) { c.signal = parse_signal_kind(v); });
  rd.real("medium", "theta", c.theta);
  rd.real("medium", "amplitude", c.amplitude);
  rd.real("medium", "amplitude2", c.amplitude2);
  rd.real("medium", "period", c.period);
  rd.real("medium", "freq1", c.freq1);
  rd.real("medium", "freq2", c.freq2);
  rd.real("medium", "theta0", c.theta0);
  rd.real("medium", "theta1", c.theta1);
  rd.real("grid", "dx", c.dx);
  {
    double n = c.n;
    rd.real("grid", "n", n);
    if (n != std::floor(n) || n < 8 || n > (1 << 24)) errors.push_back("grid.n must be an integer in [8, 2^24]");
    else c.n = static_cast<int>(n);
  }
  if (tree.get_optional<std::string>("grid.x_left")) {
    c.has_x_left = true;
    rd.real("grid", "x_left", c.x_left);
  }
  rd.real("solver", "dt", c.dt);
  rd.get("solver", "scheme", [&](const std::string& v) { c.scheme = parse_scheme(v); });
  rd.real("solver", "rate_dt", c.rate_dt);
  rd.real("solver", "epsilon", c.epsilon);
  rd.get("solver", "closure", [&](const std::string& v) {
    if (v != "front" && v != "zero") throw std::invalid_argument("closure must be front or zero, got '" + v + "'");
    c.closure = v;
  });
  rd.real("solver", "t_relax", c.t_relax);
  rd.real("solver", "wave_tolerance", c.wave_tolerance);
  if (auto ex = tree.get_child_optional("experiment")) {
    for (const auto& [key, node] : *ex) {
      if (key == "name") c.experiment = node.data();
      else c.experiment_keys[key] = node.data();
    }
  }
  rd.get("output", "directory", [&](const std::string& v) { c.directory = v; });
  rd.real("output", "cadence", c.cadence);
  rd.get("output", "seed", [&](const std::string& v) {
    std::uint64_t s = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
    if (ec != std::errc() || p != v.data() + v.size()) throw std::invalid_argument("expected an unsigned integer");
    c.seed = s;
  });

  // cross-field checks
  if (!(c.dx > 0.0)) errors.push_back("grid.dx must be positive");
  if (!(c.kernel_scale > 0.0)) errors.push_back("kernel.scale must be positive");
  if (!(c.trunc_tol > 0.0 && c.trunc_tol < 1e-3)) errors.push_back("kernel.trunc_tol must lie in (0, 1e-3)");
  if (!(c.dt > 0.0)) errors.push_back("solver.dt must be positive");
  if (!(c.rate_dt > 0.0)) errors.push_back("solver.rate_dt must be positive");
  if (!(c.epsilon >= 0.0)) errors.push_back("solver.epsilon must be nonnegative");
  if (!(c.t_relax > 0.0)) errors.push_back("solver.t_relax must be positive");
  if (!(c.cadence > 0.0)) errors.push_back("output.cadence must be positive");
  if (c.signal != SignalKind::constant && !(c.period > 0.0)) errors.push_back("medium.period must be positive");
  if (!c.experiment.empty()) {
    const auto names = experiment_names();
    if (std::find(names.begin(), names.end(), c.experiment) == names.end() && c.experiment != "simulate") {
      std::string msg = "unknown experiment '" + c.experiment + "'";
      if (auto m = nearest_match(c.experiment, names); !m.empty()) msg += "; did you mean " + m + "?";
      errors.push_back(msg);
    }
  }
  if (errors.empty()) {
    try {
      const Nonlinearity nl = c.nonlinearity();
      if (c.dx > 0.0 && c.kernel_scale > 0.0) make_kernel(c.kernel_family, c.kernel_scale, c.dx, c.trunc_tol);
      const Grid1D g = c.has_x_left ? Grid1D::make(c.x_left, c.dx, c.n) : Grid1D::centered(c.dx, c.n);
      const Lab lab = c.lab();
      try {
        validate_solver_config(lab.order_cfg, nl, g);
      } catch (const Error& e) {
        errors.push_back(std::string("solver: ") + e.what());
      }
    } catch (const Error& e) {
      errors.push_back(e.what());
    }
  }
  if (!errors.empty()) throw ConfigError(origin, errors);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(ErrorKind::configuration, "cannot open config file " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path);
}

void write_effective_config(const RunConfig& cfg, const std::string& directory) {
  std::filesystem::create_directories(directory);
  std::ofstream os(directory + "/effective_config");
  if (!os) fail(ErrorKind::configuration, "cannot write to " + directory);
  os << cfg.effective();
}

}  // namespace frontlab
