#include "frontlab/media.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "frontlab/error.hpp"

namespace frontlab {

const char* to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::constant: return "constant";
    case SignalKind::periodic: return "periodic";
    case SignalKind::quasiperiodic: return "quasiperiodic";
  }
  return "unknown";
}

SignalKind parse_signal_kind(const std::string& name) {
  if (name == "constant") return SignalKind::constant;
  if (name == "periodic") return SignalKind::periodic;
  if (name == "quasiperiodic") return SignalKind::quasiperiodic;
  fail(ErrorKind::invalid_argument, "unknown signal kind '" + name + "'");
}

TimeSignal TimeSignal::constant(double value) {
  TimeSignal s;
  s.kind = SignalKind::constant;
  s.mean = value;
  return s;
}

TimeSignal TimeSignal::periodic(double mean, double amplitude, double period) {
  if (!(period > 0.0)) fail(ErrorKind::invalid_argument, "signal period must be positive");
  TimeSignal s;
  s.kind = SignalKind::periodic;
  s.mean = mean;
  s.amp1 = amplitude;
  s.period = period;
  return s;
}

TimeSignal TimeSignal::quasiperiodic(double mean, double a1, double a2) {
  TimeSignal s;
  s.kind = SignalKind::quasiperiodic;
  s.mean = mean;
  s.amp1 = a1;
  s.amp2 = a2;
  return s;
}

namespace {
// phase in [0, T); fmod is exact, so t and t + T give the same phase whenever t + T is representable
double phase_of(double t, double T) {
  double p = std::fmod(t, T);
  if (p < 0.0) p += T;
  return p;
}
}  // namespace

double TimeSignal::value(double t) const {
  switch (kind) {
    case SignalKind::constant: return mean;
    case SignalKind::periodic: return mean + amp1 * std::sin(2.0 * std::numbers::pi * phase_of(t, period) / period);
    case SignalKind::quasiperiodic: return mean + amp1 * std::sin(freq1 * t) + amp2 * std::sin(freq2 * t);
  }
  return mean;
}

double TimeSignal::derivative(double t) const {
  switch (kind) {
    case SignalKind::constant: return 0.0;
    case SignalKind::periodic: {
      const double w = 2.0 * std::numbers::pi / period;
      return amp1 * w * std::cos(w * phase_of(t, period));
    }
    case SignalKind::quasiperiodic: return amp1 * freq1 * std::cos(freq1 * t) + amp2 * freq2 * std::cos(freq2 * t);
  }
  return 0.0;
}

double TimeSignal::lower_bound() const {
  switch (kind) {
    case SignalKind::constant: return mean;
    case SignalKind::periodic: return mean - std::abs(amp1);
    case SignalKind::quasiperiodic: return mean - std::abs(amp1) - std::abs(amp2);
  }
  return mean;
}

double TimeSignal::upper_bound() const {
  switch (kind) {
    case SignalKind::constant: return mean;
    case SignalKind::periodic: return mean + std::abs(amp1);
    case SignalKind::quasiperiodic: return mean + std::abs(amp1) + std::abs(amp2);
  }
  return mean;
}

bool TimeSignal::time_constant() const {
  return kind == SignalKind::constant || (amp1 == 0.0 && (kind == SignalKind::periodic || amp2 == 0.0));
}

struct Nonlinearity::Table {
  std::vector<double> samples;
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
  double zero = 0.5;

  explicit Table(std::vector<double> v)
      : samples(std::move(v)),
        spline(samples.data(), samples.size(), Nonlinearity::kUMin,
               (Nonlinearity::kUMax - Nonlinearity::kUMin) / static_cast<double>(samples.size() - 1)) {}
};

namespace {

inline double cubic_f(double theta, double u) { return u * (u - theta) * (1.0 - u); }
inline double cubic_fu(double theta, double u) { return -3.0 * u * u + 2.0 * (1.0 + theta) * u - theta; }

void check_domain(double u) {
  if (!(u >= Nonlinearity::kUMin && u <= Nonlinearity::kUMax)) {
    std::ostringstream os;
    os.precision(17);
    os << "u = " << u << " outside [-1, 2]";
    fail(ErrorKind::domain, os.str());
  }
}

}  // namespace

Nonlinearity Nonlinearity::cubic(const TimeSignal& theta, double theta0, double theta1) {
  Nonlinearity nl;
  nl.family_ = NonlinearityFamily::cubic_theta;
  nl.signal_ = theta;
  nl.theta_lo_ = theta.lower_bound();
  nl.theta_hi_ = theta.upper_bound();
  if (!(nl.theta_lo_ > 0.0 && nl.theta_hi_ < 1.0))
    fail(ErrorKind::invalid_argument, "theta(t) must stay inside (0,1)");
  nl.theta0_ = theta0;
  nl.theta1_ = theta1;
  nl.derive_constants();
  return nl;
}

Nonlinearity Nonlinearity::table(std::vector<double> f_values, double theta0, double theta1) {
  if (f_values.size() < 8) fail(ErrorKind::invalid_argument, "custom table needs at least 8 samples");
  Nonlinearity nl;
  nl.family_ = NonlinearityFamily::custom_table;
  auto tab = std::make_shared<Table>(std::move(f_values));
  // interior zero: first sign change from negative to positive inside (0,1)
  double a = 1e-3, b = 1.0 - 1e-3;
  const int probes = 1000;
  double prev = tab->spline(a);
  bool found = false;
  for (int k = 1; k <= probes && !found; ++k) {
    const double u = a + (b - a) * k / probes;
    const double v = tab->spline(u);
    if (prev < 0.0 && v >= 0.0) {
      double lo = a + (b - a) * (k - 1) / probes, hi = u;
      for (int it = 0; it < 100; ++it) {
        const double m = 0.5 * (lo + hi);
        if (tab->spline(m) < 0.0) lo = m; else hi = m;
      }
      tab->zero = 0.5 * (lo + hi);
      found = true;
    }
    prev = v;
  }
  if (!found) fail(ErrorKind::invalid_argument, "custom table has no bistable interior zero in (0,1)");
  nl.table_ = tab;
  nl.signal_ = TimeSignal::constant(tab->zero);
  nl.theta_lo_ = nl.theta_hi_ = tab->zero;
  nl.theta0_ = theta0;
  nl.theta1_ = theta1;
  nl.derive_constants();
  return nl;
}

bool Nonlinearity::autonomous() const { return family_ == NonlinearityFamily::custom_table || signal_.time_constant(); }

double Nonlinearity::theta_at(double t) const { return table_ ? table_->zero : signal_.value(t); }

double Nonlinearity::f(double t, double u) const {
  check_domain(u);
  if (table_) return table_->spline(u);
  return cubic_f(signal_.value(t), u);
}

double Nonlinearity::fu(double t, double u) const {
  check_domain(u);
  if (table_) return table_->spline.prime(u);
  return cubic_fu(signal_.value(t), u);
}

double Nonlinearity::ft(double t, double u) const {
  check_domain(u);
  if (table_) return 0.0;
  return -u * (1.0 - u) * signal_.derivative(t);
}

Nonlinearity::Frame Nonlinearity::frame(double t) const { return Frame{this, t, theta_at(t)}; }

double Nonlinearity::Frame::f(double u) const {
  check_domain(u);
  if (nl->table_) return nl->table_->spline(u);
  return cubic_f(theta, u);
}

std::optional<double> Nonlinearity::theta_star() const {
  if (autonomous()) return theta_lo_;
  return std::nullopt;
}

Nonlinearity Nonlinearity::lower_bound() const {
  if (table_) return *this;
  return cubic(TimeSignal::constant(theta_hi_), theta0_, theta1_);
}

Nonlinearity Nonlinearity::upper_bound() const {
  if (table_) return *this;
  return cubic(TimeSignal::constant(theta_lo_), theta0_, theta1_);
}

std::vector<double> Nonlinearity::scan_times(int t_samples, double t_window) const {
  if (autonomous()) return {0.0};
  std::vector<double> ts;
  const double span = signal_.kind == SignalKind::periodic ? signal_.period : t_window;
  const int m = std::max(t_samples, 2);
  for (int k = 0; k < m; ++k) ts.push_back(span * k / m);
  return ts;
}

namespace {

// theta values that bound every cubic quantity linear in theta
std::vector<double> extreme_thetas(const Nonlinearity& nl) {
  if (nl.family() == NonlinearityFamily::custom_table) return {};
  return {nl.theta_lo(), nl.theta_hi()};
}

template <class Fn>
double scan_max(const Nonlinearity& nl, double u_lo, double u_hi, double t_window, int u_samples, Fn value) {
  double best = -std::numeric_limits<double>::infinity();
  const auto times = nl.scan_times(256, t_window > 0.0 ? t_window : 200.0);
  auto sweep = [&](auto eval) {
    for (int i = 0; i <= u_samples; ++i) {
      const double u = u_lo + (u_hi - u_lo) * i / u_samples;
      best = std::max(best, eval(u));
    }
  };
  for (double t : times) sweep([&](double u) { return value(nl.fu(t, u)); });
  for (double th : extreme_thetas(nl)) sweep([&](double u) { return value(cubic_fu(th, u)); });
  return best;
}

}  // namespace

double Nonlinearity::sup_abs_fu(double u_lo, double u_hi, double t_window) const {
  return scan_max(*this, u_lo, u_hi, t_window, 3000, [](double d) { return std::abs(d); });
}

double Nonlinearity::sup_neg_fu(double u_lo, double u_hi, double t_window) const {
  return scan_max(*this, u_lo, u_hi, t_window, 3000, [](double d) { return -d; });
}

void Nonlinearity::derive_constants() {
  if (!(theta0_ > 0.0 && theta0_ < theta_lo_))
    fail(ErrorKind::invalid_argument, "theta0 must lie in (0, inf theta)");
  if (!(theta1_ > theta_hi_ && theta1_ < 1.0))
    fail(ErrorKind::invalid_argument, "theta1 must lie in (sup theta, 1)");
  beta0_ = -scan_max(*this, kUMin, theta0_, 200.0, 512, [](double d) { return d; });
  beta1_ = -scan_max(*this, theta1_, kUMax, 200.0, 512, [](double d) { return d; });
  lipschitz_ = sup_abs_fu(kUMin, kUMax, 200.0);
}

std::string Nonlinearity::describe() const {
  std::ostringstream os;
  if (table_) {
    os << "custom_table(" << table_->samples.size() << " samples, zero=" << table_->zero << ")";
  } else {
    os << "cubic theta(t) " << to_string(signal_.kind) << " mean=" << signal_.mean;
    if (signal_.kind != SignalKind::constant) os << " a1=" << signal_.amp1;
    if (signal_.kind == SignalKind::quasiperiodic) os << " a2=" << signal_.amp2;
    if (signal_.kind == SignalKind::periodic) os << " T=" << signal_.period;
  }
  return os.str();
}

double eval_f(const Nonlinearity& nl, double t, double u) { return nl.f(t, u); }
double eval_fu(const Nonlinearity& nl, double t, double u) { return nl.fu(t, u); }

const HypothesisCheck* HypothesisReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool HypothesisReport::pass() const {
  for (const auto& c : checks)
    if (c.status == "fail") return false;
  return true;
}

namespace {

HypothesisCheck check_h2(const Nonlinearity& nl, int u_samples, const std::vector<double>& times) {
  HypothesisCheck c;
  c.name = "H2";
  const Nonlinearity fb = nl.lower_bound();
  const Nonlinearity fbt = nl.upper_bound();
  double zero_err = 0.0, bound_violation = 0.0, sup_deriv = 0.0;
  for (double t : times) {
    zero_err = std::max({zero_err, std::abs(nl.f(t, 0.0)), std::abs(nl.f(t, 1.0))});
    for (int i = 0; i <= u_samples; ++i) {
      const double u = static_cast<double>(i) / u_samples;
      const double v = nl.f(t, u);
      bound_violation = std::max({bound_violation, fb.f(0.0, u) - v, v - fbt.f(0.0, u)});
    }
    for (int i = 0; i <= u_samples; ++i) {
      const double u = Nonlinearity::kUMin + (Nonlinearity::kUMax - Nonlinearity::kUMin) * i / u_samples;
      sup_deriv = std::max(sup_deriv, std::abs(nl.ft(t, u)) + std::abs(nl.fu(t, u)));
    }
  }
  c.witnesses["theta_B"] = nl.theta_hi();
  c.witnesses["theta_B_tilde"] = nl.theta_lo();
  c.witnesses["equilibrium_residual"] = zero_err;
  c.witnesses["bound_violation"] = std::max(0.0, bound_violation);
  c.witnesses["sup_ft_plus_fu"] = sup_deriv;
  c.pass = zero_err <= 1e-12 && bound_violation <= 0.0 && std::isfinite(sup_deriv);
  c.status = c.pass ? "pass" : "fail";
  if (nl.theta_lo() == nl.theta_hi()) c.note = "f_B and f_B~ coincide";
  return c;
}

HypothesisCheck check_h3(const Nonlinearity& nl, int u_samples, const std::vector<double>& times) {
  HypothesisCheck c;
  c.name = "H3";
  double max0 = -std::numeric_limits<double>::infinity(), max1 = max0;
  for (double t : times) {
    for (int i = 0; i <= u_samples; ++i) {
      const double u0 = Nonlinearity::kUMin + (nl.theta0() - Nonlinearity::kUMin) * i / u_samples;
      const double u1 = nl.theta1() + (Nonlinearity::kUMax - nl.theta1()) * i / u_samples;
      max0 = std::max(max0, nl.fu(t, u0));
      max1 = std::max(max1, nl.fu(t, u1));
    }
  }
  c.witnesses["theta0"] = nl.theta0();
  c.witnesses["theta1"] = nl.theta1();
  c.witnesses["beta0"] = -max0;
  c.witnesses["beta1"] = -max1;
  c.witnesses["omega"] = std::min(-max0, -max1);
  c.pass = max0 < 0.0 && max1 < 0.0 && nl.theta0() < nl.theta_lo() && nl.theta1() > nl.theta_hi();
  c.status = c.pass ? "pass" : "fail";
  return c;
}

HypothesisCheck check_h4(const Nonlinearity& nl, double t_window) {
  HypothesisCheck c;
  c.name = "H4";
  const double delta = 0.01;
  std::vector<double> ts, us;
  if (nl.autonomous()) {
    ts = {0.0};
    us = {nl.theta_lo()};
  } else {
    // the unstable branch attracts under the backward flow
    const double h = 1e-2;
    const int steps_window = static_cast<int>(std::ceil(t_window / h));
    double u = 0.5 * (nl.theta_lo() + nl.theta_hi());
    double t = 2.0 * steps_window * h;
    auto g = [&](double tt, double uu) { return -nl.f(tt, uu); };
    for (int k = 2 * steps_window; k > 0; --k) {
      if (k <= steps_window) {
        ts.push_back(t);
        us.push_back(u);
      }
      const double k1 = g(t, u), k2 = g(t - 0.5 * h, u + 0.5 * h * k1), k3 = g(t - 0.5 * h, u + 0.5 * h * k2),
                   k4 = g(t - h, u + h * k3);
      u += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
      t -= h;
    }
  }
  double margin = std::numeric_limits<double>::infinity();
  double lo = 1.0, hi = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    lo = std::min(lo, us[k]);
    hi = std::max(hi, us[k]);
    for (int j = -4; j <= 4; ++j) margin = std::min(margin, nl.fu(ts[k], us[k] + delta * j / 4.0));
  }
  c.witnesses["nondegeneracy_margin"] = margin;
  c.witnesses["branch_min"] = lo;
  c.witnesses["branch_max"] = hi;
  c.witnesses["band_halfwidth"] = delta;
  c.witnesses["t_window"] = nl.autonomous() ? 0.0 : t_window;
  c.pass = margin > 0.0 && lo > nl.theta0() && hi < nl.theta1();
  if (nl.autonomous()) {
    c.status = c.pass ? "pass" : "fail";
    c.note = "constant branch at the interior zero";
  } else {
    c.status = c.pass ? "evidence" : "fail";
    c.note = "finite-window (H4) evidence";
  }
  return c;
}

HypothesisCheck check_h5(const Nonlinearity& nl, int u_samples) {
  HypothesisCheck c;
  c.name = "H5";
  const auto star = nl.theta_star();
  if (!star) {
    c.status = "not_applicable";
    c.pass = false;
    c.note = "theta(t) is not constant; no common zero to check";
    return c;
  }
  bool ok = true;
  for (int i = 1; i < u_samples; ++i) {
    const double u = static_cast<double>(i) / u_samples;
    const double v = nl.f(0.0, u);
    if (std::abs(u - *star) < 1e-9) continue;
    if ((u < *star && v >= 0.0) || (u > *star && v <= 0.0)) ok = false;
  }
  c.witnesses["theta_star"] = *star;
  c.pass = ok;
  c.status = ok ? "pass" : "fail";
  return c;
}

}  // namespace

HypothesisReport validate_hypotheses(const Nonlinearity& nl, int u_samples, int t_samples, double t_window,
                                     std::optional<double> supplied_speed) {
  HypothesisReport r;
  if (u_samples < 64 || t_samples < 64) {
    HypothesisCheck c;
    c.name = "sampling";
    c.status = "fail";
    c.note = "u_samples and t_samples must be at least 64";
    r.checks.push_back(c);
    return r;
  }
  const auto times = nl.scan_times(t_samples, t_window);
  r.checks.push_back(check_h2(nl, u_samples, times));
  r.checks.push_back(check_h3(nl, u_samples, times));
  r.checks.push_back(check_h4(nl, t_window));
  r.checks.push_back(check_h5(nl, u_samples));
  HypothesisCheck ub;
  ub.name = "unbalanced";
  double integral = 0.0;
  const Nonlinearity fb = nl.lower_bound();
  const int q = 2000;
  for (int i = 0; i <= q; ++i) {
    const double u = static_cast<double>(i) / q;
    const double w = (i == 0 || i == q) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    integral += w * fb.f(0.0, u);
  }
  integral /= 3.0 * q;
  ub.witnesses["integral_fB"] = integral;
  if (supplied_speed) {
    ub.witnesses["speed_fB"] = *supplied_speed;
    ub.pass = *supplied_speed > 1e-3;
    ub.status = ub.pass ? "pass" : "fail";
  } else {
    ub.status = "pending";
    ub.note = "speed of the f_B wave not supplied";
  }
  r.checks.push_back(ub);
  return r;
}

double ode_flow(const Nonlinearity& nl, double t0, double u0, double t1, double tol) {
  namespace odeint = boost::numeric::odeint;
  if (!(t1 >= t0)) fail(ErrorKind::invalid_argument, "ode_flow needs t1 >= t0");
  if (!(u0 >= Nonlinearity::kUMin && u0 <= Nonlinearity::kUMax)) fail(ErrorKind::domain, "ode_flow u0 outside [-1,2]");
  if (!(tol > 0.0)) fail(ErrorKind::invalid_argument, "ode_flow tol must be positive");
  if (t1 == t0) return u0;
  using state = double;
  auto rhs = [&](const state& u, state& du, double t) { du = nl.f(t, u); };
  auto stepper = odeint::make_controlled(tol, 0.0, odeint::runge_kutta_dopri5<state, double, state, double, odeint::vector_space_algebra>());
  state u = u0;
  try {
    odeint::integrate_adaptive(stepper, rhs, u, t0, t1, std::min(0.1, t1 - t0));
  } catch (const odeint::step_adjustment_error& e) {
    fail(ErrorKind::stiffness, std::string("ode_flow step size underflow: ") + e.what());
  } catch (const odeint::no_progress_error& e) {
    fail(ErrorKind::stiffness, std::string("ode_flow made no progress: ") + e.what());
  }
  return u;
}

}  // namespace frontlab
