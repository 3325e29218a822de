#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "frontlab/error.hpp"
#include "frontlab/evolve.hpp"
#include "frontlab/kernel.hpp"
#include "frontlab/media.hpp"
#include "frontlab/theorems.hpp"

namespace frontlab {

struct RunConfig {
  // [kernel]
  KernelFamily kernel_family = KernelFamily::gaussian;
  double kernel_scale = 1.0;
  double trunc_tol = 1e-12;
  // [medium]
  SignalKind signal = SignalKind::constant;
  double theta = 0.25;
  double amplitude = 0.0;
  double amplitude2 = 0.0;
  double period = 1.0;
  double freq1 = 1.0;
  double freq2 = 1.4142135623730951;
  double theta0 = 0.05;
  double theta1 = 0.95;
  // [grid]
  double dx = 0.1;
  int n = 1024;
  bool has_x_left = false;
  double x_left = 0.0;
  // [solver]
  double dt = 0.1;
  Scheme scheme = Scheme::euler_monotone;
  double rate_dt = 0.1;
  double epsilon = 0.0;
  std::string closure = "front";
  double t_relax = 400.0;
  double wave_tolerance = 1e-7;
  // [experiment]
  std::string experiment;
  std::map<std::string, std::string> experiment_keys;
  // [output]
  std::string directory = "frontlab_out";
  double cadence = 1.0;
  std::uint64_t seed = 0;

  Nonlinearity nonlinearity() const;
  Lab lab() const;

  double number(const std::string& key, double fallback) const;
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;

  /// Flat `section.key = value` listing of every setting, defaults included.
  std::string effective() const;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string origin, std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);
void write_effective_config(const RunConfig& cfg, const std::string& directory);

/// Closest candidate by edit distance, or empty when nothing is close.
std::string nearest_match(const std::string& key, const std::vector<std::string>& candidates);

}  // namespace frontlab
