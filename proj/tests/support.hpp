#pragma once

// Small helpers shared by the test programs.

#include <algorithm>
#include <cstddef>
#include <cmath>
#include <numbers>
#include <random>

#include "heatctl/grid.hpp"

namespace heatctl::testing {

inline GridFunction random_function(const SpatialGrid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  GridFunction f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = dist(rng);
  return f;
}

inline ControlSignal random_control(const SpatialGrid& grid, const TimeMesh& mesh,
                                    const ControlRegion& region, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ControlSignal u(grid, mesh);
  for (auto& v : u.raw()) v = dist(rng);
  u.restrict_to(region);
  return u;
}

inline GridFunction sine_mode(const SpatialGrid& grid, int k = 1) {
  return GridFunction::sample(grid, [&](double x) {
    return std::sin(k * std::numbers::pi * x / grid.length());
  });
}

/// Eigenvalue of the three-point Dirichlet Laplacian for sin(k pi x / L).
inline double discrete_eigenvalue(const SpatialGrid& grid, int k = 1) {
  const double s = std::sin(k * std::numbers::pi * grid.h() / (2.0 * grid.length()));
  return 4.0 / (grid.h() * grid.h()) * s * s;
}

/// One Crank–Nicolson amplification factor for eigenvalue lambda.
inline double cn_factor(double lambda, double dt) {
  return (1.0 - 0.5 * dt * lambda) / (1.0 + 0.5 * dt * lambda);
}

/// Unit-norm first mode: the h-norm of sqrt(2) sin(pi x) is exactly 1 on the grid.
inline GridFunction unit_mode(const SpatialGrid& grid) {
  return std::sqrt(2.0) * sine_mode(grid);
}

/// Exact discrete N_2(T) for the unit first mode with omega = Omega and a = 0: the
/// mode evolves by rho = cn_factor per step, so the Gramian restricted to it is
/// sum_j w_j rho^{2(m-j)} and N_2 = rho^m / sqrt(that sum).
inline double discrete_mode_norm(const SpatialGrid& grid, double T, std::size_t m) {
  const double dt = T / static_cast<double>(m);
  const double rho = cn_factor(discrete_eigenvalue(grid), dt);
  double gram = 0.0;
  for (std::size_t j = 0; j <= m; ++j) {
    const double w = (j == 0 || j == m) ? 0.5 * dt : dt;
    gram += w * std::pow(rho, 2.0 * static_cast<double>(m - j));
  }
  return std::pow(rho, static_cast<double>(m)) / std::sqrt(gram);
}

/// Continuum N_2(T) for the unit first mode: e^{-pi^2 T} sqrt(2 pi^2 / (1 - e^{-2 pi^2 T})).
inline double continuum_mode_norm(double T) {
  const double lam = std::numbers::pi * std::numbers::pi;
  return std::exp(-lam * T) * std::sqrt(2.0 * lam / (1.0 - std::exp(-2.0 * lam * T)));
}

inline double relative_difference(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace heatctl::testing
