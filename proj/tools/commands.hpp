#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace heatctl::cli {

/// Exit statuses of the runner.
enum Status : int {
  kOk = 0,
  kInternalError = 1,
  kConfigError = 2,
  kNotConverged = 3,  // solver non-convergence or a failed invariant; partial outputs written
};

struct RunOptions {
  std::string out_dir;                 // overrides config.output when nonempty
  std::optional<std::uint64_t> seed;   // overrides config.seed
  std::size_t threads = 1;
};

const std::vector<std::string>& command_names();

/// Runs one command, writes its artifacts and record.json, and returns the exit status.
int run_command(const std::string& command, ExperimentConfig config, const RunOptions& options);

}  // namespace heatctl::cli
