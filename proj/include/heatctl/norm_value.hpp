#pragma once

// The minimal control norm N_p(T, y0) = inf{ ||u||_{L^p(0,T;L2)} : y(T; y0, u) = 0 },
// computed through the dual problem (V_q = -1/2 N_p^2, 1/p + 1/q = 1), its
// sup-formula lower bound, curves T -> N_p(T, y0) and their long-horizon plateau.

#include <cstddef>
#include <string>
#include <vector>

#include "heatctl/dual.hpp"
#include "heatctl/heat_system.hpp"

namespace heatctl {

struct NormDiagnostics {
  bool converged = false;
  double relative_gradient = 0.0;  // ||grad J|| / ||grad J(0)|| at exit
  double primal_norm = 0.0;        // ||u||_{L^p} of the computed control
  double primal_dual_gap = 0.0;    // |primal_norm - N_p| / N_p
  double null_residual = 0.0;      // ||y(T; y0, u)|| / ||y0||
  double smoothing = 0.0;
  std::size_t iterations = 0;
  std::string message;
};

struct NormValue {
  double horizon = 0.0;
  double p = 2.0;
  double value = 0.0;  // N_p(T, y0)
  ControlSignal control;
  MinimizerResult minimizer;
  NormDiagnostics diagnostics;
};

/// N_p(T, y0) for p in (1, inf]; p = inf uses q = 1 with delta-continuation.
/// y0 = 0 gives 0 with the zero control.
NormValue norm_value(const HeatModel& model, double horizon, const GridFunction& y0, double p,
                     const SolverConfig& config);

struct DualSupCheck {
  double value = 0.0;         // max over accepted trials (0 when none is accepted)
  std::size_t accepted = 0;
  std::size_t rejected = 0;   // trials whose restricted adjoint vanished
  std::size_t best = 0;       // index of the maximizing trial
};

/// max over trials of <y(T; y0, 0), z> / ||chi_omega phi(.; T, z)||_{L^q(0,T;L2)}, a lower
/// bound for N_p(T, y0). Zero trials are a configuration error.
DualSupCheck dual_sup_check(const HeatSystem& system, const GridFunction& y0, double q,
                            const std::vector<GridFunction>& trials);

struct NormSample {
  double horizon = 0.0;
  double value = 0.0;
  bool converged = false;
  double primal_dual_gap = 0.0;
};

struct NormCurve {
  double p = 2.0;
  std::vector<NormSample> samples;  // strictly increasing horizons
  bool partial = false;             // some sample did not converge
  /// All converged samples strictly decrease, N_{i+1} < N_i (1 - 1e-9). A violation
  /// points at solver accuracy, not at the mathematics.
  bool monotone = true;
  std::size_t first_violation = 0;  // index i with N_{i+1} >= N_i (1 - 1e-9), if any
};

/// Evaluates N_p at every horizon (independently, on up to `threads` threads).
NormCurve norm_curve(const HeatModel& model, const GridFunction& y0, double p,
                     const std::vector<double>& horizons, const SolverConfig& config,
                     std::size_t threads = 1);

struct NhatEstimate {
  double value = 0.0;              // smallest converged sample (the last one on a monotone curve)
  std::size_t tail_samples = 0;    // samples entering the plateau residual
  double plateau_residual = 0.0;   // max relative change between consecutive tail samples
  bool converged = false;          // plateau_residual <= 10%
};

/// Long-horizon plateau of a norm curve. Needs at least 5 converged samples, the last
/// horizon at least 4 times the first.
NhatEstimate nhat_estimate(const NormCurve& curve);

}  // namespace heatctl
