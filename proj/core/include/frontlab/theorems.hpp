#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frontlab/evolve.hpp"
#include "frontlab/field.hpp"
#include "frontlab/kernel.hpp"
#include "frontlab/media.hpp"
#include "frontlab/report.hpp"
#include "frontlab/waves.hpp"

namespace frontlab {

/// Shared inputs of every experiment.
struct Lab {
  Nonlinearity nl = Nonlinearity::cubic(TimeSignal::constant(0.25));
  Kernel kernel;
  Grid1D grid;
  SolverConfig order_cfg;  // euler_monotone, used wherever ordering is asserted
  SolverConfig rate_cfg;   // rk4, used for speeds and rates
  WaveOptions wave;
  double t_relax = 400.0;
  std::string out_dir;  // empty: no files
  std::uint64_t seed = 0;

  /// Gaussian kernel of the given scale, centered window, dt clipped to the monotone bound.
  static Lab standard(const Nonlinearity& nl, double scale = 1.0, double dx = 0.1, int n = 1024);
  std::string artifact(const std::string& file) const;
};

/// y such that u(0, 0; s, phi(. - y)) = target_theta, phi the wave of the bounding reaction.
double pin_shift(double s, const Nonlinearity& nl, const Kernel& kernel, const SolverConfig& cfg,
                 const Grid1D& grid, const TravelingWave& wave, double target_theta);

struct FrontOptions {
  std::vector<double> s_list{-10.0, -20.0, -40.0, -80.0};
  double t_probe = 40.0;
  double pin_theta = -1.0;  // negative picks the mean of theta(t)
  double accept_distance = 1e-3;
  double noise_floor = 1e-5;  // distances below this count as settled
  double width_lo = 0.05, width_hi = 0.95;
};

struct FrontRun {
  FieldState state;           // solution at t = 0 from the earliest start time
  std::vector<double> pinned;  // same profile with X_theta moved onto x = 0 of a centered window
  Grid1D pinned_grid;
  TravelingWave bound_wave;
  double pin_theta = 0.5;
  double width = 0.0;
  bool accepted = false;
  ExperimentReport report;
};

FrontRun construct_front(const Lab& lab, const FrontOptions& opt = {});

struct SteepnessOptions {
  double M = 5.0;
  double periods = 20.0;  // multiples of the period (time units when autonomous)
  double sample = 0.5;
  double threshold = -0.01;
};

ExperimentReport steepness_experiment(const Lab& lab, const FrontRun& front, const SteepnessOptions& opt = {});

struct Perturbation {
  enum class Kind { shift, bump, step, noise };
  Kind kind = Kind::bump;
  double amplitude = 0.05;
  double shift = 0.0;
  double width = 1.0;
  std::uint64_t seed = 0;

  FieldState apply(const FieldState& front, double level = 0.5) const;
};

const char* to_string(Perturbation::Kind k);
Perturbation::Kind parse_perturbation(const std::string& name);

ExperimentReport stability_experiment(const Lab& lab, const FrontRun& front, const Perturbation& p,
                                      double t_run = 60.0, double sample = 0.5);

struct ResidualOptions {
  double t_run = 20.0;
  double mu = 0.01;
  double safety = 10.0;
};

/// Discrete residual of the shifted envelope functions u -/+ along an exact front.
ExperimentReport subsolution_residual(const Lab& lab, const ResidualOptions& opt = {});

struct SqueezeOptions {
  double shift = 0.5;
  double bump = 0.02;
  double delta_hat = 0.001;
  double t_run = 30.0;
  double sample = 1.0;
};

ExperimentReport squeezing_diagnostic(const Lab& lab, const FrontRun& front, const SqueezeOptions& opt = {});

struct DecayOptions {
  double theta2 = 0.04;
  double h = 1.0;
  std::vector<double> t0_list{0.0, 5.0, 10.0};
  double t_end = 50.0;
  double fit_a = 5.0, fit_b = 12.0;  // in kernel scales
  double spread = 0.05;
  double log_tol = 0.1;
};

ExperimentReport decay_experiment(const Lab& lab, const FrontRun& front, const DecayOptions& opt = {});

struct InitialDatum {
  enum class Kind { step, smooth_step, nonmonotone };
  Kind kind = Kind::step;
  double position = 0.0;
  double width = 2.0;
  double bump = 0.3;

  FieldState build(const Grid1D& grid, double t = 0.0) const;
};

const char* to_string(InitialDatum::Kind k);
InitialDatum::Kind parse_initial_datum(const std::string& name);

ExperimentReport uniqueness_experiment(const Lab& lab, const InitialDatum& a, const InitialDatum& b,
                                       double t_run = 80.0, double sample = 0.5);

struct PeriodicityOptions {
  int n_periods = 40;
  double period = 0.0;  // used only for a time-constant medium
  double level = -1.0;  // negative picks the mean of theta(t)
  int phases = 8;
};

ExperimentReport periodicity_experiment(const Lab& lab, const FrontRun& front, const PeriodicityOptions& opt = {});

struct AsymptoticOptions {
  double t_run = 400.0;
  double cadence = 0.1;
  double window = 1.0;
};

ExperimentReport asymptotic_speed_experiment(const Lab& lab, const AsymptoticOptions& opt = {});

ExperimentReport perturbation_limit(const Lab& lab, const std::vector<double>& eps_list,
                                    const FrontOptions& front = {}, double width_ratio = 2.0);

struct ComparisonOptions {
  int pairs = 200;
  int steps = 500;
  int n = 512;
  double slack = 1e-12;
};

/// Random ordered pairs evolved with the monotone scheme; ordering must survive.
ExperimentReport comparison_experiment(const Lab& lab, const ComparisonOptions& opt = {});

/// u = 0 and u = 1 across kernel families, schemes and closures.
ExperimentReport equilibria_experiment(const Lab& lab, int steps = 20, double tol = 1e-12);

struct KernelBoundOptions {
  int pairs = 50;
  int n = 128;
  std::vector<double> elapsed{0.5, 1.0, 2.0};
  double dt = 0.01;
  double slack = 1e-12;
};

/// Pointwise lower bound of an ordered gap by an iterated-kernel integral of its initial value.
ExperimentReport kernel_bound_experiment(const Lab& lab, const KernelBoundOptions& opt = {});

struct WaveCheckOptions {
  double advect = 1.0;
  double init_width = 4.0;
  double advect_tol = 1e-3;
  double agree_tol = 1e-4;
};

/// compute_wave plus its advection and initialization-independence checks.
ExperimentReport wave_experiment(const Lab& lab, const WaveCheckOptions& opt = {});

std::vector<std::string> experiment_names();

}  // namespace frontlab
