#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <string>

#include "frontlab/config.hpp"
#include "frontlab/runner.hpp"
#include "frontlab/theorems.hpp"

int main(int argc, char** argv) {
  CLI::App app{"frontlab: fronts of nonlocal dispersal equations in time-heterogeneous media"};
  app.require_subcommand(1);

  std::string config_path, out_dir, experiment;
  std::uint64_t seed = 0;
  int jobs = 1;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides output.directory)");
    sub->add_option("--seed", seed, "seed for randomized perturbations");
    sub->add_option("--jobs", jobs, "parallel experiments for suite")->check(CLI::PositiveNumber);
  };
  common(app.add_subcommand("validate", "check the medium's hypotheses"));
  common(app.add_subcommand("wave", "traveling wave of the bounding reaction and the unbalanced check"));
  common(app.add_subcommand("simulate", "evolve an initial datum and record snapshots and interfaces"));
  auto* exp = app.add_subcommand("experiment", "run one experiment");
  common(exp);
  std::string names;
  for (const auto& n : frontlab::experiment_names()) names += (names.empty() ? "" : ", ") + n;
  exp->add_option("name", experiment, "one of: " + names);
  common(app.add_subcommand("suite", "run every experiment for the config"));

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  frontlab::RunOptions opt;
  opt.out_dir = out_dir;
  if (app.get_subcommands().front()->count("--seed")) opt.seed = seed;
  opt.jobs = jobs;
  try {
    const frontlab::RunConfig cfg = frontlab::load_config(config_path);
    return frontlab::run_command(sub, experiment, cfg, opt, std::cout);
  } catch (const frontlab::ConfigError& e) {
    std::cerr << "configuration rejected: " << config_path << '\n';
    for (const auto& v : e.violations()) std::cerr << "  " << v << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
}
