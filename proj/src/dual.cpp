#include "heatctl/dual.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>

#include "heatctl/errors.hpp"
#include "heatctl/optim.hpp"
#include "heatctl/simd/kernels.hpp"

namespace heatctl {

namespace {

void check_exponent(double q) {
  if (!(q >= 1.0) || !std::isfinite(q))
    throw DomainError("dual exponent q must satisfy 1 <= q < inf, got " + std::to_string(q));
}

void check_grid_function(const DualProblem& problem, const GridFunction& z) {
  if (z.size() != problem.sys().grid().size())
    throw ConfigurationError("terminal datum has " + std::to_string(z.size()) +
                             " values, grid has " + std::to_string(problem.sys().grid().size()));
}

// Restricted copy of a trajectory, used as the q = 2 control chi_omega phi.
ControlSignal restricted_copy(const SpaceTimeField& phi, const ControlRegion& region) {
  ControlSignal u(phi);
  u.restrict_to(region);
  return u;
}

// Gramian action (without ridge) on coefficients: y(T; 0, chi phi(.; T, z)).
GridFunction gramian_apply(const HeatSystem& sys, const GridFunction& z) {
  const Trajectory phi = sys.adjoint(z);
  const ControlSignal u = restricted_copy(phi, sys.region());
  return sys.forward_final(sys.zero_state(), &u);
}

double relative_control_distance(const ControlSignal& a, const ControlSignal& b) {
  ControlSignal diff = a;
  for (std::size_t k = 0; k < diff.raw().size(); ++k) diff.raw()[k] -= b.raw()[k];
  const double ref = bochner_norm(b, 2.0);
  return ref > 0.0 ? bochner_norm(diff, 2.0) / ref : bochner_norm(diff, 2.0);
}

}  // namespace

double conjugate_exponent(double r) {
  if (!(r >= 1.0)) throw DomainError("exponent must be at least 1");
  if (r == 1.0) return std::numeric_limits<double>::infinity();
  if (std::isinf(r)) return 1.0;
  return r / (r - 1.0);
}

DualProblem DualProblem::null_control(std::shared_ptr<const HeatSystem> system, GridFunction y0,
                                      double q) {
  if (!system) throw ConfigurationError("dual problem needs a heat system");
  check_exponent(q);
  DualProblem p;
  p.system = std::move(system);
  p.kind = TargetKind::NullControl;
  check_grid_function(p, y0);
  p.data = std::move(y0);
  p.linear = p.system->forward_final(p.data);
  p.q = q;
  return p;
}

DualProblem DualProblem::reach_target(std::shared_ptr<const HeatSystem> system, GridFunction yT,
                                      double q) {
  if (!system) throw ConfigurationError("dual problem needs a heat system");
  check_exponent(q);
  DualProblem p;
  p.system = std::move(system);
  p.kind = TargetKind::ReachTarget;
  check_grid_function(p, yT);
  p.data = std::move(yT);
  p.linear = -p.data;
  p.q = q;
  return p;
}

void SolverConfig::validate() const {
  if (smoothing && !(*smoothing >= 0.0))
    throw ConfigurationError("smoothing delta must be nonnegative");
  if (!(ridge >= 0.0)) throw ConfigurationError("ridge epsilon must be nonnegative");
  if (!(tolerance > 0.0)) throw ConfigurationError("gradient tolerance must be positive");
  if (max_iterations == 0) throw ConfigurationError("max_iterations must be positive");
  if (starts == 0) throw ConfigurationError("at least one start is required");
  if (memory == 0) throw ConfigurationError("L-BFGS memory must be positive");
}

double SolverConfig::smoothing_for(const DualProblem& problem) const {
  if (smoothing) return *smoothing;
  return problem.q == 2.0 ? 0.0 : 1e-8 * problem.data.norm();
}

ControlSignal control_formula(const SpaceTimeField& phi, const ControlRegion& region, double q,
                              double smoothing) {
  check_exponent(q);
  const std::vector<double> s = phi.restricted_profile(region);
  std::vector<double> sd(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) sd[j] = std::hypot(s[j], smoothing);
  const double Q = bochner_norm(sd, phi.mesh(), q);
  ControlSignal u = restricted_copy(phi, region);
  if (Q == 0.0) {
    std::fill(u.raw().begin(), u.raw().end(), 0.0);
    return u;
  }
  if (q == 2.0) return u;
  const double lead = std::pow(Q, 2.0 - q);
  for (std::size_t j = 0; j < s.size(); ++j) {
    double factor = 0.0;
    if (sd[j] > 0.0) factor = lead * std::pow(sd[j], q - 2.0);
    auto state = u.state(j);
    for (double& v : state) v *= factor;
  }
  return u;
}

DualEvaluation evaluate_dual(const DualProblem& problem, const GridFunction& z, double smoothing,
                             double ridge, bool with_gradient) {
  check_grid_function(problem, z);
  const HeatSystem& sys = problem.sys();
  const double q = problem.q;
  if (q < 2.0 && smoothing == 0.0 && with_gradient)
    throw ConfigurationError("smoothing delta must be positive when q < 2");
  DualEvaluation out;
  out.adjoint = sys.adjoint(z);
  const std::vector<double> s = out.adjoint.restricted_profile(sys.region());
  std::vector<double> sd(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) sd[j] = std::hypot(s[j], smoothing);
  out.restricted_norm = bochner_norm(sd, sys.mesh(), q);
  const std::vector<double> floor(s.size(), smoothing);
  const double Q0 = smoothing > 0.0 ? bochner_norm(floor, sys.mesh(), q) : 0.0;
  // <y0, phi(0)> = <y(T; y0, 0), z> exactly for the discrete evolution; the right-hand
  // side avoids the rounding of y0 against a strongly damped phi(0).
  out.linear_term = problem.linear.inner(z);
  const double quad = 0.5 * (out.restricted_norm - Q0) * (out.restricted_norm + Q0);
  out.value = quad + out.linear_term + 0.5 * ridge * z.inner(z);
  if (with_gradient) {
    out.control = control_formula(out.adjoint, sys.region(), q, smoothing);
    out.gradient = sys.forward_final(sys.zero_state(), &out.control);
    out.gradient += problem.linear;
    if (ridge > 0.0) out.gradient.add_scaled(ridge, z);
  }
  return out;
}

double evaluate_J(const DualProblem& problem, const GridFunction& z, const SolverConfig& config) {
  config.validate();
  return evaluate_dual(problem, z, config.smoothing_for(problem), config.ridge, false).value;
}

GridFunction grad_J(const DualProblem& problem, const GridFunction& z, const SolverConfig& config) {
  config.validate();
  const double delta = config.smoothing_for(problem);
  if (problem.q < 2.0 && delta == 0.0)
    throw ConfigurationError("smoothing delta must be positive when q < 2");
  return evaluate_dual(problem, z, delta, config.ridge, true).gradient;
}

namespace {

struct StartOutcome {
  optim::Result run;
  std::size_t iterations = 0;
  double smoothing = 0.0;  // delta of the returned stage
};

// Exact Hessian of the smoothed functional at z, assembled column by column and
// factorized; used as the initial inverse Hessian of L-BFGS. With v_j = chi phi_j,
// s_j = ||v_j||_delta, c_j = Q^{2-q} s_j^{q-2} and a = y(T; 0, s^{q-2} v):
//     H dz = y(T; 0, U) + (2-q) Q^{2-2q} <a, dz> a + eps dz,
//     U_j  = c_j (dv_j + (q-2) <v_j, dv_j> v_j / s_j^2).
// Slices where the profile sits at the smoothing kink carry curvature ~ 1/delta;
// a frozen-weight Gramian misses the radial structure there, the exact Hessian
// does not.
class HessianPreconditioner {
 public:
  static constexpr double kJitter = 1e-12;

  HessianPreconditioner(const DualProblem& problem, const GridFunction& z, double smoothing,
                        double ridge) {
    const HeatSystem& sys = problem.sys();
    const double q = problem.q;
    const double h = sys.grid().h();
    const std::size_t n = sys.grid().size();
    const auto N = static_cast<Eigen::Index>(n);

    ControlSignal v(sys.adjoint(z));
    v.restrict_to(sys.region());
    const std::size_t count = v.time_nodes();
    const std::vector<double> raw = v.restricted_profile(sys.region());
    std::vector<double> sd(count), c(count, 1.0), radial(count, 0.0);
    for (std::size_t j = 0; j < count; ++j) sd[j] = std::hypot(raw[j], smoothing);
    const double Q = bochner_norm(sd, sys.mesh(), q);
    const bool curved = q != 2.0 && Q > 0.0;
    ControlSignal shape = v;  // s^{q-2} v
    if (curved) {
      for (std::size_t j = 0; j < count; ++j) {
        const double sj = sd[j];
        c[j] = sj > 0.0 ? std::pow(Q, 2.0 - q) * std::pow(sj, q - 2.0) : 0.0;
        radial[j] = sj > 0.0 ? (q - 2.0) / (sj * sj) : 0.0;
        simd::scale(sj > 0.0 ? std::pow(sj, q - 2.0) : 0.0, shape.state(j));
      }
    }
    const GridFunction a = curved ? sys.forward_final(sys.zero_state(), &shape) : GridFunction(sys.grid());
    const double rank_one = curved ? (2.0 - q) * std::pow(Q, 2.0 - 2.0 * q) : 0.0;

    Eigen::MatrixXd H(N, N);
    for (std::size_t k = 0; k < n; ++k) {
      GridFunction e(sys.grid());
      e[k] = 1.0;
      ControlSignal u(sys.adjoint(e));
      u.restrict_to(sys.region());
      for (std::size_t j = 0; j < count; ++j) {
        auto dv = u.state(j);
        if (radial[j] != 0.0) {
          const auto vj = v.state(j);
          const double along = radial[j] * h * simd::dot(vj, dv);
          simd::axpy(along, vj, dv);
        }
        simd::scale(c[j], dv);
      }
      GridFunction col = sys.forward_final(sys.zero_state(), &u);
      if (rank_one != 0.0) col.add_scaled(rank_one * h * a[k], a);
      for (std::size_t i = 0; i < n; ++i) H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = col[i];
    }
    Eigen::MatrixXd A = 0.5 * (H + H.transpose());
    A.diagonal().array() += ridge;
    const double jitter = kJitter * A.diagonal().cwiseAbs().maxCoeff();
    A.diagonal().array() += jitter;
    for (int attempt = 0; attempt < 6; ++attempt) {
      llt_.compute(A);
      if (llt_.info() == Eigen::Success) return;
      A.diagonal().array() += jitter * std::pow(100.0, attempt + 1);
    }
    throw InconsistencyError("Hessian of the dual functional is not positive definite");
  }

  void apply(const std::vector<double>& in, std::vector<double>& out) const {
    const Eigen::Map<const Eigen::VectorXd> v(in.data(), static_cast<Eigen::Index>(in.size()));
    const Eigen::VectorXd x = llt_.solve(v);
    std::copy(x.data(), x.data() + x.size(), out.begin());
  }

 private:
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// Runs L-BFGS through a decreasing ladder of smoothing levels, warm-starting each
// stage from the previous one. With adaptive = true the ladder stops at the first
// stage that does not converge and returns the last converged one.
StartOutcome run_quasi_newton(const DualProblem& problem, const SolverConfig& config,
                              std::vector<double> x0, const std::vector<double>& deltas,
                              bool adaptive, double reference) {
  // Iterations between rebuilds of the preconditioner at the current iterate.
  constexpr std::size_t kRefresh = 60;
  const HeatSystem& sys = problem.sys();
  const SpatialGrid& grid = sys.grid();
  const bool dense = grid.size() <= kGramianMaxNodes;
  StartOutcome out;
  for (std::size_t stage = 0; stage < deltas.size(); ++stage) {
    const double delta = deltas[stage];
    const bool last = stage + 1 == deltas.size();
    optim::Options opts;
    opts.tolerance = (last || adaptive) ? config.tolerance : std::max(config.tolerance, 1e-6);
    opts.max_iterations = config.max_iterations;
    opts.memory = config.memory;
    opts.metric = grid.h();
    const optim::Objective f = [&](const std::vector<double>& x, std::vector<double>& g) {
      const DualEvaluation e = evaluate_dual(problem, GridFunction(grid, x), delta, config.ridge, true);
      std::copy(e.gradient.values().begin(), e.gradient.values().end(), g.begin());
      return e.value;
    };
    std::size_t remaining = config.max_iterations;
    std::size_t stage_iterations = 0;
    optim::Result run;
    std::vector<double> x = x0;
    while (true) {
      std::shared_ptr<HessianPreconditioner> pre;
      if (dense) {
        pre = std::make_shared<HessianPreconditioner>(problem, GridFunction(grid, x), delta,
                                                      config.ridge);
        opts.preconditioner = [pre](const std::vector<double>& in, std::vector<double>& o) {
          pre->apply(in, o);
        };
      }
      opts.max_iterations = dense ? std::min(remaining, kRefresh) : remaining;
      run = optim::lbfgs(f, std::move(x), opts, reference);
      stage_iterations += run.iterations;
      x = run.x;
      remaining -= std::min(remaining, run.iterations);
      if (run.converged || remaining == 0 || run.iterations == 0) break;
      if (run.message == "line search failed" && run.iterations < 2) break;
    }
    out.iterations += stage_iterations;
    if (adaptive && !run.converged && stage > 0) break;  // keep the last converged stage
    out.run = std::move(run);
    out.smoothing = delta;
    x0 = out.run.x;
    if (adaptive && !out.run.converged) break;
  }
  return out;
}

}  // namespace

MinimizerResult minimize_J(const DualProblem& problem, const SolverConfig& config) {
  config.validate();
  check_exponent(problem.q);
  const HeatSystem& sys = problem.sys();
  const SpatialGrid& grid = sys.grid();
  double delta = config.smoothing_for(problem);
  if (problem.q < 2.0 && delta == 0.0 && !problem.data.is_zero())
    throw ConfigurationError("smoothing delta must be positive when q < 2");
  if (config.initial_guess && config.initial_guess->size() != grid.size())
    throw ConfigurationError("initial guess has the wrong size");

  MinimizerResult res;
  res.problem = problem;
  res.smoothing = delta;
  res.ridge = config.ridge;
  res.reference_grad_norm = problem.linear.norm();

  auto finish = [&](GridFunction z) {
    const DualEvaluation e = evaluate_dual(problem, z, delta, config.ridge, false);
    res.z_hat = std::move(z);
    res.adjoint = e.adjoint;
    res.value = e.value;
    res.norm = std::sqrt(std::max(-2.0 * e.value, 0.0));
    res.restricted_norm = e.restricted_norm;
  };

  if (res.reference_grad_norm == 0.0) {
    // Zero data: J >= 0 = J(0) (null-control kind) or J is a pure norm (reach kind).
    finish(GridFunction(grid));
    res.converged = true;
    res.converged_starts = 1;
    res.message = "zero data";
    return res;
  }

  const std::vector<double> zero(grid.size(), 0.0);
  std::vector<double> first_start = config.initial_guess.value_or(zero);

  if (problem.q == 2.0 && delta == 0.0) {
    optim::Options opts;
    opts.tolerance = config.tolerance;
    opts.max_iterations = config.max_iterations;
    opts.metric = grid.h();
    const optim::LinearOperator A = [&](const std::vector<double>& in, std::vector<double>& out) {
      const GridFunction zin(grid, in);
      GridFunction g = gramian_apply(sys, zin);
      if (config.ridge > 0.0) g.add_scaled(config.ridge, zin);
      std::copy(g.values().begin(), g.values().end(), out.begin());
    };
    std::vector<double> rhs(problem.linear.values().begin(), problem.linear.values().end());
    for (double& v : rhs) v = -v;
    const optim::Result run = optim::conjugate_gradient(A, rhs, std::move(first_start), opts);
    finish(GridFunction(grid, run.x));
    res.grad_norm = run.grad_norm;
    res.converged = run.converged;
    res.iterations = run.iterations;
    res.converged_starts = run.converged ? 1 : 0;
    res.message = run.message;
    return res;
  }

  // Smoothing ladder. For q < 2 the control formula carries ||chi phi(t)||_delta^{q-2},
  // and the profile vanishes at the end of the horizon, so rounding is amplified by
  // ~delta^{q-2}. With the default delta the ladder is adaptive and stops at the
  // smallest level the minimizer resolves to tolerance; an explicit delta is always
  // the final level.
  const double requested = delta;
  std::vector<double> ladder{delta};
  const bool adaptive = problem.q < 2.0 && !config.smoothing;
  if (problem.q == 1.0 || adaptive) {
    ladder.clear();
    for (std::size_t k = config.continuation_decades + 1; k-- > 0;)
      ladder.push_back(delta * std::pow(10.0, static_cast<double>(k)));
  }

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> spread(0.5, 2.0);
  std::vector<StartOutcome> runs;
  double scale = 0.0;
  for (std::size_t s = 0; s < config.starts; ++s) {
    std::vector<double> x0 = first_start;
    if (s > 0) {
      double norm2 = 0.0;
      for (double& v : x0) {
        v = normal(rng);
        norm2 += v * v;
      }
      const double target = (scale > 0.0 ? scale : 1.0) * spread(rng);
      for (double& v : x0) v *= target / std::sqrt(norm2);
    }
    StartOutcome o = run_quasi_newton(problem, config, std::move(x0), ladder, adaptive,
                                      res.reference_grad_norm);
    res.iterations += o.iterations;
    if (s == 0) {
      double n2 = 0.0;
      for (double v : o.run.x) n2 += v * v;
      scale = std::sqrt(n2);
      // Later starts stop at the level the first one reached.
      if (adaptive)
        while (ladder.size() > 1 && ladder.back() < o.smoothing) ladder.pop_back();
    }
    runs.push_back(std::move(o));
  }

  std::size_t best = 0;
  for (std::size_t s = 0; s < runs.size(); ++s) {
    const bool better_flag = runs[s].run.converged && !runs[best].run.converged;
    const bool same_flag = runs[s].run.converged == runs[best].run.converged;
    if (better_flag || (same_flag && runs[s].run.value < runs[best].run.value)) best = s;
  }
  res.converged_starts = static_cast<std::size_t>(std::count_if(
      runs.begin(), runs.end(), [](const StartOutcome& r) { return r.run.converged; }));
  delta = runs[best].smoothing;
  res.smoothing = delta;
  finish(GridFunction(grid, runs[best].run.x));
  res.grad_norm = runs[best].run.grad_norm;
  res.converged = runs[best].run.converged;
  res.message = runs[best].run.message;
  if (adaptive && delta > requested) {
    std::ostringstream note;
    note << " (smoothing continuation stopped at delta = " << std::setprecision(3) << delta << ")";
    res.message += note.str();
  }

  if (runs.size() > 1) {
    const ControlSignal reference = control_formula(res.adjoint, sys.region(), problem.q, delta);
    for (std::size_t s = 0; s < runs.size(); ++s) {
      if (s == best || !runs[s].run.converged) continue;
      const Trajectory phi = sys.adjoint(GridFunction(grid, runs[s].run.x));
      const ControlSignal u = control_formula(phi, sys.region(), problem.q, runs[s].smoothing);
      res.starts_agreement = std::max(res.starts_agreement, relative_control_distance(u, reference));
    }
  }
  return res;
}

ControlSignal control_from_minimizer(const MinimizerResult& result) {
  const HeatSystem& sys = result.problem.sys();
  if (result.z_hat.is_zero() && result.problem.kind == TargetKind::ReachTarget &&
      !result.problem.data.is_zero())
    throw InconsistencyError("zero minimizer for a nonzero target state");
  return control_formula(result.adjoint, sys.region(), result.problem.q, result.smoothing);
}

GramianSolution gramian_oracle(const DualProblem& problem, const SolverConfig& config) {
  config.validate();
  if (problem.q != 2.0) throw ConfigurationError("the Gramian oracle needs q = 2");
  const HeatSystem& sys = problem.sys();
  const std::size_t n = sys.grid().size();
  if (n > kGramianMaxNodes)
    throw ConfigurationError("dense Gramian oracle refuses n = " + std::to_string(n) +
                             " (bound: n <= " + std::to_string(kGramianMaxNodes) + ")");
  Eigen::MatrixXd G(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    GridFunction e(sys.grid());
    e[k] = 1.0;
    const GridFunction col = gramian_apply(sys, e);
    for (std::size_t i = 0; i < n; ++i) G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = col[i];
  }
  GramianSolution out;
  out.size = n;
  const double peak = G.cwiseAbs().maxCoeff();
  out.symmetry_residual = peak > 0.0 ? (G - G.transpose()).cwiseAbs().maxCoeff() / peak : 0.0;
  out.matrix.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      out.matrix[i * n + k] = G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));

  Eigen::MatrixXd A = 0.5 * (G + G.transpose());
  A.diagonal().array() += config.ridge;
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs(static_cast<Eigen::Index>(i)) = -problem.linear[i];
  const Eigen::LLT<Eigen::MatrixXd> llt(A);
  const bool cholesky_ok = llt.info() == Eigen::Success;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt = cholesky_ok ? Eigen::LDLT<Eigen::MatrixXd>() : A.ldlt();
  auto solve = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
    return cholesky_ok ? Eigen::VectorXd(llt.solve(r)) : Eigen::VectorXd(ldlt.solve(r));
  };
  Eigen::VectorXd z = solve(rhs);
  // Iterative refinement against the matrix-free operator: the factorization is
  // only used as a preconditioner, so the result is as accurate as the operator.
  for (int sweep = 0; sweep < 3; ++sweep) {
    const GridFunction zf(sys.grid(), std::vector<double>(z.data(), z.data() + z.size()));
    GridFunction Az = gramian_apply(sys, zf);
    if (config.ridge > 0.0) Az.add_scaled(config.ridge, zf);
    Eigen::VectorXd r(n);
    for (std::size_t i = 0; i < n; ++i) r(static_cast<Eigen::Index>(i)) = -problem.linear[i] - Az[i];
    z += solve(r);
  }
  out.z = GridFunction(sys.grid(), std::vector<double>(z.data(), z.data() + z.size()));
  return out;
}

}  // namespace heatctl
