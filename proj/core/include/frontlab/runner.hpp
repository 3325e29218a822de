#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "frontlab/config.hpp"
#include "frontlab/report.hpp"

namespace frontlab {

struct RunOptions {
  std::string out_dir;                 // overrides output.directory when set
  std::optional<std::uint64_t> seed;   // overrides output.seed when set
  int jobs = 1;
};

/// One experiment from the config, artifacts under out_dir. Errors are captured in the report.
ExperimentReport run_experiment(const std::string& name, const RunConfig& cfg, const std::string& out_dir);

/// Dispatches validate / wave / simulate / experiment / suite. Returns the process exit status.
int run_command(const std::string& subcommand, const std::string& experiment, RunConfig cfg,
                const RunOptions& opt, std::ostream& log);

}  // namespace frontlab
