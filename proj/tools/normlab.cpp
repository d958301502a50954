// Batch front-end: constructs the explicit families, runs discretization,
// frame, and phase-retrieval experiments from flat key=value config files,
// and writes CSV/JSON/plot-data bundles.
//
//   normlab <command> --config FILE [--seed U64] [--threads K] [--out DIR]
//
// Exit codes: 0 all checks passed, 1 assertion failure, 2 config error,
// 3 resource bound exceeded. NORMLAB_BACKEND=exact|float64 overrides the
// config backend.

#include "normlab/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"norm discretization and frame sampling workbench"};
  app.get_formatter()->column_width(28);

  std::string command;
  app.add_option("command", command,
                 "construct|discretize|nikolskii|witness|frames|phase|reproduce")
      ->required();
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value experiment file")->required();
  std::uint64_t seed = 0;
  const auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  unsigned threads = 0;
  const auto* threads_opt = app.add_option("--threads", threads, "worker thread count");
  std::string out_dir;
  const auto* out_opt = app.add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    normlab::ExperimentConfig cfg = normlab::ExperimentConfig::parse_file(config_path);
    if (!cfg.command.empty() && cfg.command != command)
      throw normlab::config_error("config command '" + cfg.command +
                                  "' disagrees with the command line '" + command + "'");
    cfg.command = command;
    if (seed_opt->count()) cfg.seed = seed;
    if (threads_opt->count()) cfg.threads = threads;
    if (out_opt->count()) cfg.out = out_dir;

    const normlab::RunOutcome outcome = normlab::run(cfg);
    const std::string dir = cfg.out.value_or("normlab-out");
    outcome.bundle.write_to(dir);
    std::cout << outcome.message << "; reports under " << dir << "\n";
    return outcome.exit_code;
  } catch (const normlab::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return normlab::kExitConfigError;
  } catch (const normlab::resource_error& e) {
    std::cerr << "resource bound: " << e.what() << "\n";
    return normlab::kExitResourceBound;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return normlab::kExitConfigError;
  }
}
