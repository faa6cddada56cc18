#pragma once

// Attainable states and the map H_q.
//
// For q in (1, inf) an element xi = chi_omega phi(.; T, z) of the space of
// restricted adjoint trajectories defines the control
//     u_xi(t) = ||xi||_{L^q}^{2-q} ||xi(t)||_omega^{q-2} xi(t),
// with ||u_xi||_{L^p} = ||xi||_{L^q}, and H_q(xi) = y(T; 0, u_xi). u_xi is the
// minimal-norm control reaching H_q(xi), so the attainable norm of H_q(xi) is
// ||xi||_{L^q}. The attainable norm of an arbitrary y_T is computed from the
// reach-target dual problem.
//
// For a separable potential a1(x) + a2(t) the factor exp(int_t^T a2) maps
// adjoint trajectories of a1 + a2 onto those of a1 (the gauge frame), where the
// equation is time invariant and adjoint trajectories can be shifted in time.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "heatctl/dual.hpp"

namespace heatctl {

/// xi = chi_omega phi(.; T, z) together with its terminal data and exponent.
class XiElement {
 public:
  XiElement(std::shared_ptr<const HeatSystem> system, GridFunction z, double q);

  const HeatSystem& system() const { return *system_; }
  const std::shared_ptr<const HeatSystem>& system_ptr() const noexcept { return system_; }
  const GridFunction& z() const noexcept { return z_; }
  double q() const noexcept { return q_; }
  /// phi(.; T, z) on the whole interval.
  const Trajectory& adjoint() const noexcept { return adjoint_; }
  /// chi_omega phi(.; T, z).
  const ControlSignal& restricted() const noexcept { return restricted_; }
  /// ||xi||_{L^q(0,T;L2(omega))}.
  double norm() const noexcept { return norm_; }
  bool is_zero() const noexcept { return norm_ == 0.0; }
  /// min_{t_j < T} ||xi(t_j)||_omega; positive whenever z is nonzero.
  double min_profile_before_end() const noexcept { return min_profile_; }

  XiElement scaled(double c) const;

 private:
  std::shared_ptr<const HeatSystem> system_;
  GridFunction z_;
  double q_;
  Trajectory adjoint_;
  ControlSignal restricted_;
  double norm_ = 0.0;
  double min_profile_ = 0.0;
};

/// u_xi for q in (1, inf); the zero element gives the zero control.
ControlSignal u_xi(const XiElement& xi);

struct AttainableElement {
  GridFunction y_T;
  double norm = 0.0;      // ||y_T||_{A_{T,p}} = ||u_xi||_{L^p}
  ControlSignal control;  // u_xi, the minimal-norm control reaching y_T
};

/// H_q(xi) = y(T; 0, u_xi).
AttainableElement h_q_map(const XiElement& xi);

struct AttainableNorm {
  double value = 0.0;         // ||y_T||_{A_{T,p}}
  ControlSignal control;      // minimal-norm control reaching y_T
  MinimizerResult minimizer;  // of the reach-target dual problem
  double reach_residual = 0.0;  // ||y(T; 0, u) - y_T|| / ||y_T||
  bool converged = false;
};

/// inf{ ||u||_{L^p(0,T;L2)} : y(T; 0, u) = y_T } for p in (1, inf].
AttainableNorm attainable_norm(std::shared_ptr<const HeatSystem> system, const GridFunction& y_T,
                               double p, const SolverConfig& config);

struct RoundTrip {
  double q = 2.0;
  double xi_norm = 0.0;          // ||xi||_{L^q}
  double control_norm = 0.0;     // ||u_xi||_{L^p}
  double norm_identity_gap = 0.0;  // | ||u_xi||_p - ||xi||_q | / ||xi||_q
  double recovered_error = 0.0;  // ||xi_hat - xi||_{L^q} / ||xi||_{L^q}
  double attainable_gap = 0.0;   // | ||H_q(xi)||_A - ||xi||_q | / ||xi||_q
  bool converged = false;
};

/// Maps xi to y_T = H_q(xi), recovers the minimizer of the reach-target problem
/// for y_T and compares its restricted adjoint and norm with xi.
RoundTrip roundtrip(const XiElement& xi, const SolverConfig& config);

/// Multiplies the trajectory at node t_j by exp(+/- sum_{k >= j} dt a2(t_k + dt/2)):
/// the plus sign maps adjoints of a1 + a2 onto adjoints of a1.
Trajectory gauge_transform(const Trajectory& trajectory, const TimeProfile& a2,
                           bool inverse = false);

/// || gauge(phi_{a1+a2}(.; T, z)) - phi_{a1}(.; T, z) || / || phi_{a1}(.; T, z) || in
/// L2(0,T;L2). Requires a separable potential.
double gauge_residual(const HeatSystem& system, const GridFunction& z);

struct ShiftDensity {
  std::vector<double> fractions;
  std::vector<double> residuals;  // one per fraction, same order
  /// Residuals strictly decrease as the fraction decreases.
  bool decreasing = false;
};

/// In the gauge frame psi_hat = gauge(phi(.; T, z)), for T_k = (1 - f) T restart
/// the adjoint of a1 from psi_hat(T_k) at time T (a time shift of psi_hat by f T)
/// and report ||chi_omega (psi_k - psi_hat)||_{L^q(0,T;L2(omega))}. Every f T must
/// be a whole number of time steps. General potentials are refused.
ShiftDensity shift_density_check(const XiElement& xi, std::span<const double> fractions);

}  // namespace heatctl
