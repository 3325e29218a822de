#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/convolution.hpp"
#include "frontlab/field.hpp"
#include "frontlab/fronts.hpp"
#include "frontlab/kernel.hpp"
#include "frontlab/media.hpp"

namespace frontlab {

enum class Scheme { euler_monotone, rk4 };

const char* to_string(Scheme s);
Scheme parse_scheme(const std::string& name);

struct SolverConfig {
  double dt = 0.1;
  Scheme scheme = Scheme::euler_monotone;
  double epsilon = 0.0;
  Closure closure = Closure::front();
  bool recenter = true;
  double recenter_level = 0.5;
  double recenter_target = 0.0;  // window coordinate
  double recenter_band = 0.0;    // trigger distance; 0 picks 1/16 of the window
  std::string dump_dir;          // where a NaN abort writes the last two snapshots
};

/// dt (1 + L_f + 2 eps / dx^2); must not exceed 1 for the monotone scheme.
double monotone_number(const SolverConfig& cfg, const Nonlinearity& nl, double dx);
/// Largest dt satisfying the monotone condition.
double monotone_dt_limit(const Nonlinearity& nl, double epsilon, double dx);
void validate_solver_config(const SolverConfig& cfg, const Nonlinearity& nl, const Grid1D& grid);

/// Owns the scratch space and the convolution plan for one simulation.
class Evolver {
 public:
  Evolver(const Nonlinearity& nl, const Kernel& kernel, const SolverConfig& cfg, const Grid1D& grid);

  void step(FieldState& state, double h);
  void step(FieldState& state) { step(state, cfg_.dt); }
  void rhs(double t, std::span<const double> u, std::span<double> out);

  const SolverConfig& config() const { return cfg_; }
  const Nonlinearity& nonlinearity() const { return nl_; }
  const Kernel& kernel() const { return conv_.kernel(); }
  Convolver& convolver() { return conv_; }

 private:
  const Nonlinearity& nl_;
  SolverConfig cfg_;
  int n_;
  double dx_;
  Convolver conv_;
  std::vector<double> k1_, k2_, k3_, k4_, tmp_;
};

FieldState step(const FieldState& state, const Nonlinearity& nl, const Kernel& kernel, const SolverConfig& cfg);

/// Integer-cell translation: values[i] <- values[i + k], shift_accum += k dx.
void translate_cells(FieldState& state, long k, const Closure& closure);

/// Moves the window so X_level lands within dx of target. Returns the cell shift.
long recenter(FieldState& state, double level, double target, const Closure& closure = Closure::front());

struct Observer {
  enum class Kind { snapshot, interface, callback };
  Kind kind = Kind::snapshot;
  double cadence = 1.0;
  std::vector<double> levels{0.5};
  std::function<void(const FieldState&)> callback;
  bool include_start = true;
};

struct Records {
  std::vector<FieldState> snapshots;
  InterfaceTrack track;
  long recenter_events = 0;
  Records() : track(std::vector<double>{}) {}
};

/// Several fields advanced in lockstep on one lattice; recentering follows the reference field.
class Simulation {
 public:
  Simulation(const Nonlinearity& nl, const Kernel& kernel, const SolverConfig& cfg, std::vector<FieldState> states,
             int reference = 0);

  using Callback = std::function<void(const Simulation&)>;
  /// Advances to t_end, firing the callback at every multiple of cadence (and at the start when asked).
  void advance_to(double t_end, double cadence = 0.0, const Callback& cb = {}, bool include_start = false);

  const std::vector<FieldState>& states() const { return states_; }
  std::vector<FieldState>& states() { return states_; }
  const FieldState& state(std::size_t i = 0) const { return states_[i]; }
  double t() const { return states_.front().t; }
  long recenter_events() const { return recenter_events_; }
  Evolver& evolver() { return evolver_; }

 private:
  void maybe_recenter();
  void substep(double h);

  Evolver evolver_;
  std::vector<FieldState> states_;
  std::vector<FieldState> previous_;
  int reference_;
  long recenter_events_ = 0;
};

std::pair<FieldState, Records> evolve_to(const FieldState& state, const Nonlinearity& nl, const Kernel& kernel,
                                         const SolverConfig& cfg, double t_end,
                                         const std::vector<Observer>& observers = {});

struct ResidualField {
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // [time][interior node]
  int first_node = 0;
  double max = 0.0;
  double min = 0.0;
  double max_abs = 0.0;
};

/// Centered-time-difference residual u_t - (J*u - u) - eps u_xx - f(t,u) at interior nodes.
ResidualField residual(const std::vector<FieldState>& samples, const Nonlinearity& nl, const Kernel& kernel,
                       const SolverConfig& cfg);

}  // namespace frontlab
