#pragma once

// Experiment configuration for the command-line runner: one YAML file per
// experiment, parsed strictly (unknown keys are errors) and validated in full
// before any solve. See configs/README.md for the schema.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heatctl/dual.hpp"
#include "heatctl/heat_system.hpp"

namespace heatctl::cli {

/// A configuration problem, reported with its file position when known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// a1(x): nodal samples, or amplitude * sin(wavenumber * pi * x / L).
struct SpatialPart {
  std::vector<double> samples;
  double amplitude = 0.0;
  double wavenumber = 1.0;
};

/// a2(t): samples on a uniform grid, or offset + amplitude * cos(frequency * t).
struct TemporalPart {
  std::vector<double> samples;
  double spacing = 0.0;
  double offset = 0.0;
  double amplitude = 0.0;
  double frequency = 1.0;
};

struct PotentialSpec {
  std::string kind = "zero";  // zero | separable | general
  SpatialPart a1;
  TemporalPart a2;
  std::string table;          // general: CSV, one row of n values per time level
  double table_spacing = 0.0;
  std::vector<std::vector<double>> rows;  // the loaded table
};

struct InitialStateSpec {
  std::string kind = "smooth";  // mode | smooth | random | samples | modes
  std::vector<double> values;   // samples (n values) or sine coefficients
};

struct TimeOptimalBlock {
  std::vector<double> bounds;   // M values
  double t_hi = 1.0;
  std::optional<double> t_lo;
  double tolerance = 1e-4;
  std::optional<double> nhat;
  std::vector<double> nhat_horizons;  // estimate nhat from a norm curve when given
};

struct BangBangBlock {
  double horizon = 0.5;               // reference T defining M = N_p(T)
  std::vector<double> exponents{2.0, 4.0};
};

struct AttainableBlock {
  std::vector<double> exponents{1.5, 2.0, 3.0};  // q values
  std::size_t samples = 1;
};

struct ShiftBlock {
  std::vector<double> fractions{0.2, 0.1, 0.05, 0.025};
  double q = 2.0;
};

struct ObservabilityBlock {
  double t = 0.0;
  std::vector<double> horizons{0.1, 0.2, 0.4, 0.8, 1.6};
  std::size_t trials = 3;
  double time_step = 1e-3;
  std::size_t max_iterations = 300;
  /// Constant a2 added to the potential for the comparison fit (unset: no comparison).
  std::optional<double> comparison_shift;
};

struct ExperimentConfig {
  std::string path;        // source file ("" for the built-in default)
  std::string canonical;   // normalized YAML used for the config hash

  double length = 1.0;
  std::size_t nodes = 50;
  double horizon = 0.5;
  std::size_t steps = 100;
  double max_time_step = 0.0;  // 0: every horizon uses `steps` steps
  double alpha = 0.3;
  double beta = 0.7;
  PotentialSpec potential;
  InitialStateSpec initial_state;
  double p = 2.0;
  SolverConfig solver;

  std::vector<double> curve_horizons{0.05, 0.1, 0.2, 0.4, 0.8, 1.6};
  TimeOptimalBlock time_optimal;
  BangBangBlock bangbang;
  AttainableBlock attainable;
  ShiftBlock shift;
  ObservabilityBlock observability;

  std::uint64_t seed = 0;
  std::string output = "results";

  SpatialGrid grid() const { return SpatialGrid(length, nodes); }
  ControlRegion region() const;
  Potential build_potential() const;
  HeatModel model() const;
  std::shared_ptr<const HeatSystem> system() const;
  GridFunction initial() const;
};

/// Parses and validates a configuration file. Throws ConfigError with
/// "file:line:column: message" diagnostics.
ExperimentConfig load_config(const std::string& path);
/// Parses a configuration from text (for tests); `name` labels diagnostics.
ExperimentConfig parse_config(const std::string& text, const std::string& name);
/// Checks every numeric precondition of every block. Throws ConfigError.
void validate(const ExperimentConfig& config);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t value);

}  // namespace heatctl::cli
