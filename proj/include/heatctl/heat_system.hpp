#pragma once

// Crank–Nicolson solvers for the controlled heat equation
//     y_t - y_xx + a y = chi_omega u,   y = 0 on the boundary,
// and its adjoint  phi_t + phi_xx - a phi = 0,  phi(T) = z.
//
// One step of the homogeneous equation is P_j = g_j (I + dt/2 K_j)^{-1}(I - dt/2 K_j)
// with K_j = -D2 + diag(a). For a separable potential K_j uses a1 only and
// g_j = exp(-dt a2(t_{j+1/2})); for a general potential K_j freezes a at the
// step midpoint and g_j = 1. P_j is symmetric in the h-inner product, so the
// adjoint marches with the same maps in reverse order. The source is
// integrated with the trapezoid rule along the discrete evolution:
//     y_{j+1} = P_j (y_j + dt/2 chi u_j) + dt/2 chi u_{j+1},
// which makes  <y(T;0,v), z> = sum_j w_j <v_j, chi phi_j>  an exact identity
// for the trapezoid weights w_j.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "heatctl/grid.hpp"
#include "heatctl/potential.hpp"

namespace heatctl {

class HeatSystem {
 public:
  HeatSystem(SpatialGrid grid, ControlRegion region, Potential potential, TimeMesh mesh);

  const SpatialGrid& grid() const noexcept { return grid_; }
  const ControlRegion& region() const noexcept { return region_; }
  const Potential& potential() const noexcept { return potential_; }
  const TimeMesh& mesh() const noexcept { return mesh_; }

  /// The same equation on a different time mesh.
  HeatSystem with_mesh(const TimeMesh& mesh) const;
  /// The same equation with another potential.
  HeatSystem with_potential(Potential potential) const;

  GridFunction zero_state() const { return GridFunction(grid_); }
  ControlSignal zero_control() const { return ControlSignal(grid_, mesh_, true); }

  /// out = P_j in. `in` and `out` must not alias; `scratch` has n entries.
  void step(std::size_t j, std::span<const double> in, std::span<double> out,
            std::span<double> scratch) const;

  /// Discrete y(.; y0, u). A null control means u = 0; u is applied through chi_omega.
  Trajectory forward(const GridFunction& y0, const SpaceTimeField* control = nullptr) const;
  /// y(T; y0, u) without storing the trajectory.
  GridFunction forward_final(const GridFunction& y0, const SpaceTimeField* control = nullptr) const;
  /// State at T of the problem started at t_start from `init`, with the control used on
  /// [t_start, T] and trapezoid weights of that sub-interval.
  GridFunction forward_from(std::size_t start, const GridFunction& init,
                            const SpaceTimeField* control) const;
  /// Discrete phi(.; T, z), marched backward from phi(T) = z.
  Trajectory adjoint(const GridFunction& z) const;

 private:
  struct Factor {
    std::vector<double> explicit_diag;  // diagonal of I - dt/2 K
    std::vector<double> inv_pivot;      // Thomas pivots of I + dt/2 K, inverted
    std::vector<double> upper;          // eliminated super-diagonal
  };

  void build();
  Factor factorize(std::span<const double> a) const;
  void add_source(std::span<double> state, const SpaceTimeField& control, std::size_t j,
                  double weight) const;
  void check_state(const GridFunction& f, const char* what) const;
  void check_control(const SpaceTimeField& u) const;

  SpatialGrid grid_;
  ControlRegion region_;
  Potential potential_;
  TimeMesh mesh_;
  double coupling_ = 0.0;          // dt / (2 h^2)
  std::vector<Factor> factors_;    // one (separable) or one per step (general)
  std::vector<double> gains_;      // g_j
};

/// The equation without a horizon. Every horizon T is meshed with `steps` steps, or
/// with more when a positive `max_time_step` would otherwise be exceeded. Bounding
/// dt keeps the weakly damped high Crank–Nicolson modes out of long horizons.
struct HeatModel {
  SpatialGrid grid;
  ControlRegion region;
  Potential potential;
  std::size_t steps;
  double max_time_step = 0.0;

  std::size_t steps_for(double horizon) const;
  std::shared_ptr<const HeatSystem> on_horizon(double horizon) const;
};

Trajectory solve_forward(const SpatialGrid& grid, const ControlRegion& region,
                         const Potential& potential, const GridFunction& y0,
                         const ControlSignal& u, const TimeMesh& mesh);

Trajectory solve_adjoint(const SpatialGrid& grid, const ControlRegion& region,
                         const Potential& potential, const GridFunction& z, const TimeMesh& mesh);

/// sum_{j >= start} w_j <u_j, s_j>_omega with trapezoid weights of [t_start, T].
double space_time_inner(const SpaceTimeField& u, const SpaceTimeField& s,
                        const ControlRegion& region, std::size_t start = 0);

struct DualityCheck {
  double state_pairing = 0.0;    // <y(T; 0, v), z>
  double adjoint_pairing = 0.0;  // sum_j w_j <v_j, chi phi_j>
  double residual = 0.0;         // |difference|
  double scale = 0.0;            // |<y, z>| + ||chi v|| ||chi phi|| in L2(0,T;L2(omega))
  double relative = 0.0;         // residual / scale (0 when scale is 0)
};

DualityCheck duality_residual(const HeatSystem& system, const ControlSignal& v,
                              const GridFunction& z);

}  // namespace heatctl
