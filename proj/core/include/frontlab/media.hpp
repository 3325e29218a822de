#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace frontlab {

enum class SignalKind { constant, periodic, quasiperiodic };

const char* to_string(SignalKind kind);
SignalKind parse_signal_kind(const std::string& name);

/// theta(t): constant, mean + a1 sin(2 pi t / T), or mean + a1 sin(w1 t) + a2 sin(w2 t).
struct TimeSignal {
  SignalKind kind = SignalKind::constant;
  double mean = 0.25;
  double amp1 = 0.0;
  double amp2 = 0.0;
  double period = 1.0;
  double freq1 = 1.0;
  double freq2 = 1.4142135623730951;

  static TimeSignal constant(double value);
  static TimeSignal periodic(double mean, double amplitude, double period);
  static TimeSignal quasiperiodic(double mean, double a1, double a2);

  double value(double t) const;
  double derivative(double t) const;
  double lower_bound() const;
  double upper_bound() const;
  bool time_constant() const;
};

enum class NonlinearityFamily { cubic_theta, custom_table };

/// Bistable reaction f(t,u). Cubic family: u (u - theta(t)) (1 - u).
class Nonlinearity {
 public:
  static constexpr double kUMin = -1.0;
  static constexpr double kUMax = 2.0;

  static Nonlinearity cubic(const TimeSignal& theta, double theta0 = 0.05, double theta1 = 0.95);
  /// Autonomous tabulated f on an equispaced grid covering [-1, 2].
  static Nonlinearity table(std::vector<double> f_values, double theta0 = 0.05, double theta1 = 0.95);

  NonlinearityFamily family() const { return family_; }
  const TimeSignal& signal() const { return signal_; }
  bool autonomous() const;

  double f(double t, double u) const;
  double fu(double t, double u) const;
  double ft(double t, double u) const;

  double theta_at(double t) const;

  double theta_lo() const { return theta_lo_; }
  double theta_hi() const { return theta_hi_; }
  double theta0() const { return theta0_; }
  double theta1() const { return theta1_; }
  double beta0() const { return beta0_; }
  double beta1() const { return beta1_; }
  double omega() const { return beta0_ < beta1_ ? beta0_ : beta1_; }
  std::optional<double> theta_star() const;

  /// f_B (lower bound, cubic at theta_hi) and f_B~ (upper bound, cubic at theta_lo).
  Nonlinearity lower_bound() const;
  Nonlinearity upper_bound() const;

  /// sup |f_u| over [-1, 2] and the scanned times (cached).
  double lipschitz() const { return lipschitz_; }

  /// sup |f_u| over u in [u_lo, u_hi] and a window of times.
  double sup_abs_fu(double u_lo, double u_hi, double t_window = 0.0) const;
  /// sup (-f_u) over u in [u_lo, u_hi].
  double sup_neg_fu(double u_lo, double u_hi, double t_window = 0.0) const;

  /// Times used for scans: a single sample for autonomous media, one period for periodic.
  std::vector<double> scan_times(int t_samples, double t_window) const;

  /// Evaluator with theta(t) frozen, for inner loops.
  struct Frame {
    const Nonlinearity* nl;
    double t;
    double theta;
    double f(double u) const;
  };
  Frame frame(double t) const;

  std::string describe() const;

 private:
  struct Table;
  void derive_constants();

  NonlinearityFamily family_ = NonlinearityFamily::cubic_theta;
  TimeSignal signal_;
  std::shared_ptr<const Table> table_;
  double theta_lo_ = 0.25, theta_hi_ = 0.25;
  double theta0_ = 0.05, theta1_ = 0.95;
  double beta0_ = 0.0, beta1_ = 0.0;
  double lipschitz_ = 0.0;
};

double eval_f(const Nonlinearity& nl, double t, double u);
double eval_fu(const Nonlinearity& nl, double t, double u);

struct HypothesisCheck {
  std::string name;
  std::string status;  // pass, fail, pending, evidence, not_applicable
  bool pass = false;
  std::map<std::string, double> witnesses;
  std::string note;
};

struct HypothesisReport {
  std::vector<HypothesisCheck> checks;
  const HypothesisCheck* find(const std::string& name) const;
  bool pass() const;  // pending entries do not count
};

HypothesisReport validate_hypotheses(const Nonlinearity& nl, int u_samples = 257, int t_samples = 256,
                                     double t_window = 200.0, std::optional<double> supplied_speed = std::nullopt);

/// Scalar flow u' = f(t,u) with an adaptive embedded Runge-Kutta pair.
double ode_flow(const Nonlinearity& nl, double t0, double u0, double t1, double tol = 1e-10);

}  // namespace frontlab
