#pragma once

// The observability ratio
//     beta(t, T) = sup_z ||phi(t; T, z)|| / ||chi_omega phi(.; T, z)||_{L^1(t,T;L2(omega))}
// of the adjoint equation, estimated from below by multi-start ascent, and the
// bound shape beta(t, T) <= exp[(1 + 1/(T - t)) C0] fitted to a set of estimates.
//
// All horizons share one time step dt, and t and T must be multiples of it; then
// the trajectories of different horizons live on nested meshes and an ascent
// result for one horizon can seed another.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "heatctl/heat_system.hpp"

namespace heatctl {

struct BetaOptions {
  double time_step = 1e-3;
  std::size_t max_iterations = 300;
  /// Relative gradient tolerance of each ascent run.
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  /// Extra starting directions tried in addition to the random ones.
  std::vector<GridFunction> seeds;
};

struct BetaEstimate {
  double t = 0.0;
  double T = 0.0;
  double value = 0.0;         // best ratio found: a lower bound on the discrete beta
  GridFunction maximizer;     // terminal data attaining `value`, unit norm
  std::size_t trials = 0;     // number of ascent runs (random + eigenmode + seeds)
  /// Ratio at the lowest eigenmode of -d2/dx2 + a(., T); value >= this.
  double single_mode_ratio = 0.0;
  /// lambda_1 / (e^{lambda_1 (T - t)} - 1) with lambda_1 the lowest discrete eigenvalue:
  /// the time-continuous value of the single-mode ratio for omega = Omega, a = 0.
  double single_mode_formula = 0.0;
  double lambda1 = 0.0;
};

/// ||phi(t)|| / ||chi_omega phi||_{L^1(t,T)} for one terminal datum (0 if the
/// denominator vanishes). Degree-0 homogeneous in z.
double beta_ratio(const SpatialGrid& grid, const ControlRegion& region, const Potential& potential,
                  double t, double T, const GridFunction& z, double time_step);

BetaEstimate beta_estimate(double t, double T, const SpatialGrid& grid, const ControlRegion& region,
                           const Potential& potential, std::size_t trials,
                           const BetaOptions& options);

/// Estimates for several horizons T_i > t. Horizons are processed from the largest
/// down, and each one is also started from the previous maximizer's adjoint state
/// at T_i; this makes the estimates non-increasing in T (the exact discrete beta is).
/// When `cross` is given, cross[i].maximizer is an extra start for horizon i.
std::vector<BetaEstimate> beta_sweep(double t, const std::vector<double>& horizons,
                                     const SpatialGrid& grid, const ControlRegion& region,
                                     const Potential& potential, std::size_t trials,
                                     const BetaOptions& options,
                                     const std::vector<BetaEstimate>* cross = nullptr);

struct BetaSample {
  double t = 0.0;
  double T = 0.0;
  double beta = 0.0;
};

struct BetaBoundFit {
  std::vector<BetaSample> samples;
  /// max_i ln(beta_i) / (1 + 1/(T_i - t_i)): the smallest C0 for which the bound holds
  /// on every sample. Depends on the discretization.
  double c0 = 0.0;
  /// 1 - beta_i / exp[(1 + 1/(T_i - t_i)) C0], in [0, 1); 0 at the sample defining C0.
  std::vector<double> residuals;
  double max_residual = 0.0;
  std::size_t argmax = 0;
  /// beta_i <= exp[(1 + 1/(T_i - t_i)) C0] (1 + 1e-9) for every sample.
  bool holds = false;
};

/// Needs at least 4 samples with distinct gaps; samples with beta <= 0 are rejected.
BetaBoundFit beta_bound_fit(const std::vector<BetaSample>& samples);

/// exp[(1 + 1/gap) C0].
double beta_bound(double gap, double c0);

}  // namespace heatctl
