#include <CLI11.hpp>
#include <iostream>

#include "fhlab/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fhlab: fractional Hartree ground states, dynamics and stability experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int jobs = 1;
  auto* config_opt = app.add_option("--config", config, "run configuration (sweep file for 'sweep')");
  auto* out_opt = app.add_option("--out", out, "output directory, overrides run.output_dir");
  auto* seed_opt = app.add_option("--seed", seed, "seed, overrides run.seed");
  app.add_option("--jobs", jobs, "sweep workers")->check(CLI::PositiveNumber);

  for (const char* name : {"ground-state", "evolve", "stability", "verify", "sweep"}) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fhlab::kExitConfig;
  }
  if (config_opt->count() == 0) {
    std::cerr << "config error: --config is required\n";
    return fhlab::kExitConfig;
  }

  fhlab::CommandOverrides overrides;
  if (out_opt->count()) overrides.output_dir = out;
  if (seed_opt->count()) overrides.seed = seed;
  overrides.jobs = jobs;

  const std::string sub = app.get_subcommands().front()->get_name();
  if (sub == "sweep") return fhlab::cmd_sweep(config, overrides, std::cerr);
  return fhlab::run_command(sub, config, overrides, std::cerr);
}
