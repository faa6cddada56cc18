#pragma once

// Dual variational problems over adjoint terminal data z.
//
// With phi = phi(.; T, z), s_j = ||chi_omega phi(t_j)|| and
// Q(z) = ||chi_omega phi||_{L^q(0,T;L2(omega))}, the functionals are
//     null-control kind:  J(z) = 1/2 Q^2 + <y0, phi(0)>
//     reach-target kind:  J(z) = 1/2 Q^2 - <yT, z>
// plus an optional ridge eps/2 ||z||^2. For smoothing delta > 0 every s_j is
// replaced by sqrt(s_j^2 + delta^2); the constant 1/2 Q_delta(0)^2 is
// subtracted so that J(0) = 0 in every setting.
//
// The gradient is the final state driven by the control formula
//     u_j = Q^{2-q} s_j^{q-2} chi_omega phi_j,
// i.e. grad J(z) = y(T; 0, u) + b + eps z with b = y(T; y0, 0) (null-control
// kind) or b = -yT (reach-target kind).

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "heatctl/heat_system.hpp"

namespace heatctl {

enum class TargetKind { NullControl, ReachTarget };

/// Conjugate exponent: 1/p + 1/q = 1 (q = 1 gives p = inf, q = inf gives p = 1).
double conjugate_exponent(double r);

struct DualProblem {
  std::shared_ptr<const HeatSystem> system;
  TargetKind kind = TargetKind::NullControl;
  GridFunction data;    // y0 for the null-control kind, yT for the reach-target kind
  GridFunction linear;  // b: gradient of the linear term
  double q = 2.0;

  static DualProblem null_control(std::shared_ptr<const HeatSystem> system, GridFunction y0,
                                  double q);
  static DualProblem reach_target(std::shared_ptr<const HeatSystem> system, GridFunction yT,
                                  double q);

  const HeatSystem& sys() const { return *system; }
  double horizon() const { return system->mesh().horizon(); }
};

struct SolverConfig {
  /// delta; unset means 0 for q = 2 and 1e-8 * ||data|| otherwise.
  std::optional<double> smoothing;
  double ridge = 0.0;
  double tolerance = 1e-8;
  std::size_t max_iterations = 5000;
  std::size_t starts = 1;
  std::size_t memory = 20;
  std::uint64_t seed = 0;
  /// Decades of delta-continuation, used for q = 1 and for q < 2 with the default
  /// delta. With the default delta the continuation stops at the smallest level that
  /// converges (reported in MinimizerResult::smoothing); an explicit delta must be
  /// reached.
  std::size_t continuation_decades = 6;
  /// Warm start for the first run (coefficients on the grid).
  std::optional<std::vector<double>> initial_guess;

  void validate() const;
  double smoothing_for(const DualProblem& problem) const;
};

struct MinimizerResult {
  DualProblem problem;
  GridFunction z_hat;
  Trajectory adjoint;        // phi(.; T, z_hat)
  double value = 0.0;        // V_q (J at z_hat)
  double norm = 0.0;         // N_p = sqrt(max(-2 V_q, 0))
  double restricted_norm = 0.0;  // ||chi_omega phi_hat||_{L^q} (smoothed profile)
  double smoothing = 0.0;       // delta actually used
  double ridge = 0.0;
  double grad_norm = 0.0;
  double reference_grad_norm = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
  std::size_t converged_starts = 0;
  /// Largest relative L2(0,T;L2) distance between the controls of converged starts
  /// and the control of the best start (0 with a single start).
  double starts_agreement = 0.0;
  std::string message;

  double q() const { return problem.q; }
  double p() const { return conjugate_exponent(problem.q); }
};

/// Everything computed in one evaluation of J.
struct DualEvaluation {
  double value = 0.0;
  double restricted_norm = 0.0;  // Q (smoothed)
  double linear_term = 0.0;
  Trajectory adjoint;
  ControlSignal control;          // Q^{2-q} s^{q-2} chi phi
  GridFunction gradient;
};

DualEvaluation evaluate_dual(const DualProblem& problem, const GridFunction& z, double smoothing,
                             double ridge, bool with_gradient);

double evaluate_J(const DualProblem& problem, const GridFunction& z, const SolverConfig& config);
GridFunction grad_J(const DualProblem& problem, const GridFunction& z, const SolverConfig& config);
MinimizerResult minimize_J(const DualProblem& problem, const SolverConfig& config);

/// u(t) = N^{2-q} ||chi phi_hat(t)||_delta^{q-2} chi phi_hat(t) on omega, zero elsewhere.
ControlSignal control_from_minimizer(const MinimizerResult& result);

/// Control formula applied to an arbitrary space-time field restricted to omega.
ControlSignal control_formula(const SpaceTimeField& phi, const ControlRegion& region, double q,
                              double smoothing);

struct GramianSolution {
  GridFunction z;
  std::vector<double> matrix;  // row-major n x n, (G e_k)_i in column k
  std::size_t size = 0;
  double symmetry_residual = 0.0;  // max |G_ik - G_ki| / max |G_ik|
};

/// Largest grid accepted by the dense oracle.
inline constexpr std::size_t kGramianMaxNodes = 256;

/// Dense reference solution of the q = 2 problem: assembles the Gramian column by
/// column and solves (G + eps I) z = -b by Cholesky.
GramianSolution gramian_oracle(const DualProblem& problem, const SolverConfig& config);

}  // namespace heatctl
