#pragma once

// Time-optimal control under a norm bound: the smallest T at which y0 can be
// steered to rest with ||u||_{L^p} <= M. Because T -> N_p(T, y0) strictly
// decreases, T_star solves N_p(T_star, y0) = M, and the minimal-norm control on
// [0, T_star], extended by zero, is time optimal. T_star is found by bisection.

#include <cstddef>
#include <optional>
#include <vector>

#include "heatctl/norm_value.hpp"

namespace heatctl {

struct TimeOptimalQuery {
  double bound = 0.0;  // M
  double p = 2.0;
  GridFunction y0;
  double t_hi = 1.0;
  /// Lower bracket end; unset means t_hi / 64. While N_p(t_lo) <= M the lower end is
  /// halved, at most `max_shrinks` times.
  std::optional<double> t_lo;
  std::size_t max_shrinks = 6;
  /// Relative bisection tolerance: stop once |N_p(T) - M| <= tolerance * M.
  double tolerance = 1e-4;
  std::size_t max_bisections = 100;
  /// Long-horizon limit of the norm curve, if known: M <= nhat means no optimal control.
  std::optional<double> nhat;
};

struct BangBangReport {
  double p = 2.0;
  /// p < inf: | ||u||_{L^p} - M | / M. p = inf: the flatness residual.
  double saturation_residual = 0.0;
  /// max_t | ||u(t)|| - M | / M over [0, 0.95 T_star].
  double flatness_residual = 0.0;
  double min_profile = 0.0;   // min_t ||u(t)|| over [0, 0.95 T_star]
  double mean_profile = 0.0;  // mean of ||u(t_j)|| over the same nodes
  bool verdict = false;
};

/// p < inf: saturated (residual <= 1e-3) and nonvanishing (min >= 1e-6 mean).
/// p = inf: flatness residual <= 5e-2. The last 5% of the horizon is excluded.
BangBangReport bangbang_check(const ControlSignal& control, double p, double bound);

struct TimeOptimalResult {
  double t_star = 0.0;
  NormValue at_star;          // N_p(T_star, y0) and its minimal-norm control
  double achieved_norm = 0.0; // ||u||_{L^p(0,T_star)}
  double null_residual = 0.0; // ||y(T_star; y0, u)|| / ||y0||
  BangBangReport report;
  double bracket_lo = 0.0;    // final bracket
  double bracket_hi = 0.0;
  std::size_t bisections = 0;
  bool converged = false;     // every N_p evaluation converged and the bound is met

  const ControlSignal& control() const { return at_star.control; }
  /// ||u(t)|| of the zero-extended control: linear in time on [0, T_star], 0 after.
  double control_norm_at(double t) const;
};

TimeOptimalResult time_optimal_solve(const HeatModel& model, const TimeOptimalQuery& query,
                                     const SolverConfig& config);

}  // namespace heatctl
