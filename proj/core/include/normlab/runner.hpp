#pragma once

#include "normlab/reports.hpp"

namespace normlab {

/// Exit codes shared by the library runner and the CLI.
inline constexpr int kExitPass = 0;
inline constexpr int kExitAssertionFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitResourceBound = 3;

struct RunOutcome {
  ReportBundle bundle;
  int exit_code = kExitPass;
  std::string message;
};

/// Executes the configured pipeline deterministically under its seed.
/// Throws config_error for invalid configurations and resource_error when a
/// construction exceeds its bound; assertion failures are reported through
/// the exit code, not exceptions.
RunOutcome run(const ExperimentConfig& config);

}  // namespace normlab
