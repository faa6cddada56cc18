#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
  using namespace heatctl::cli;

  CLI::App app{"Minimal-norm and time-optimal control experiments for the 1D heat equation"};
  std::string command;
  std::string config_path;
  RunOptions options;
  std::uint64_t seed = 0;
  app.add_option("command", command, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--config", config_path, "Experiment configuration (YAML)")->required();
  app.add_option("--out", options.out_dir, "Output directory (default: the config's output)");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized trials (overrides config)");
  app.add_option("--threads", options.threads, "Worker threads for independent sweep points")
      ->check(CLI::Range(std::size_t{1}, std::size_t{256}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  if (seed_opt->count() > 0) options.seed = seed;

  ExperimentConfig config;
  try {
    config = load_config(config_path);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }
  return run_command(command, std::move(config), options);
}
