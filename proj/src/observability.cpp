#include "heatctl/observability.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "heatctl/errors.hpp"
#include "heatctl/optim.hpp"

namespace heatctl {

namespace {

std::size_t whole_steps(double value, double dt, const char* what) {
  const double s = value / dt;
  const double r = std::round(s);
  if (std::abs(s - r) > 1e-9 * std::max(1.0, s))
    throw ConfigurationError(std::string(what) + " = " + std::to_string(value) +
                             " is not a multiple of the time step " + std::to_string(dt));
  return static_cast<std::size_t>(r);
}

// The adjoint on [0, T] with start node k = t / dt.
struct RatioProblem {
  HeatSystem system;
  std::size_t start;

  RatioProblem(const SpatialGrid& grid, const ControlRegion& region, const Potential& potential,
               double t, double T, double dt)
      : system(grid, region, potential, TimeMesh(T, whole_steps(T, dt, "horizon T"))),
        start(whole_steps(t, dt, "start time t")) {
    if (!(t >= 0.0 && t < T)) throw DomainError("beta needs 0 <= t < T");
    if (start >= system.mesh().steps()) throw ConfigurationError("t must lie before T");
  }

  // f = log D - log N with N = ||phi(t)||, D = ||chi phi||_{L^1(t,T)}; f = -log ratio.
  // Returns +inf when z = 0 or phi(t) = 0.
  double evaluate(const GridFunction& z, GridFunction* grad) const {
    const Trajectory phi = system.adjoint(z);
    const GridFunction at_t = phi.at(start);
    const double N = at_t.norm();
    const std::vector<double> s = phi.restricted_profile(system.region());
    const double D = bochner_norm(s, system.mesh(), 1.0, start);
    if (!(N > 0.0)) return std::numeric_limits<double>::infinity();
    if (!(D > 0.0))
      throw InconsistencyError(
          "discrete observability fails: a nonzero adjoint vanishes on the control set");
    if (grad) {
      ControlSignal v(system.grid(), system.mesh());
      for (std::size_t j = start; j < v.time_nodes(); ++j) {
        if (!(s[j] > 0.0)) continue;
        const auto src = phi.state(j);
        auto dst = v.state(j);
        for (std::size_t i = system.region().first(); i < system.region().last(); ++i)
          dst[i] = src[i] / s[j];
      }
      GridFunction gD = system.forward_from(start, system.zero_state(), &v);
      const GridFunction gN = system.forward_from(start, at_t, nullptr);
      gD *= 1.0 / D;
      gD.add_scaled(-1.0 / (N * N), gN);
      *grad = std::move(gD);
    }
    return std::log(D) - std::log(N);
  }

  double ratio(const GridFunction& z) const {
    const double f = evaluate(z, nullptr);
    return std::isinf(f) ? 0.0 : std::exp(-f);
  }
};

struct Ascent {
  double value = 0.0;
  GridFunction z;
};

Ascent ascend(const RatioProblem& problem, GridFunction z0, const BetaOptions& options) {
  const double norm0 = z0.norm();
  if (!(norm0 > 0.0)) return {0.0, z0};
  z0 *= 1.0 / norm0;
  Ascent best{problem.ratio(z0), z0};
  const SpatialGrid& grid = problem.system.grid();
  const optim::Objective f = [&](const std::vector<double>& x, std::vector<double>& grad) {
    GridFunction g;
    const double value = problem.evaluate(GridFunction(grid, x), &g);
    if (std::isinf(value)) {
      std::fill(grad.begin(), grad.end(), 0.0);
      return value;
    }
    std::copy(g.values().begin(), g.values().end(), grad.begin());
    return value;
  };
  optim::Options opt;
  opt.tolerance = options.tolerance;
  opt.max_iterations = options.max_iterations;
  opt.metric = grid.h();
  const std::vector<double> x0(z0.values().begin(), z0.values().end());
  const optim::Result r = optim::lbfgs(f, x0, opt);
  GridFunction z(grid, r.x);
  const double n = z.norm();
  if (n > 0.0 && std::isfinite(n)) {
    z *= 1.0 / n;
    const double value = problem.ratio(z);
    if (value > best.value) best = {value, z};
  }
  return best;
}

struct LowestMode {
  double lambda = 0.0;
  GridFunction mode;
};

// Lowest eigenpair of -D2 + diag(a(., T)), the mode normalized to unit h-norm.
LowestMode lowest_mode(const SpatialGrid& grid, const Potential& potential, double T) {
  const std::size_t n = grid.size();
  const double inv_h2 = 1.0 / (grid.h() * grid.h());
  const std::vector<double> a = potential.sample(T);
  Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
  Eigen::VectorXd sub = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n > 0 ? n - 1 : 0),
                                                  -inv_h2);
  for (std::size_t i = 0; i < n; ++i) diag[static_cast<Eigen::Index>(i)] = 2.0 * inv_h2 + a[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  LowestMode out;
  out.lambda = solver.eigenvalues()[0];
  out.mode = GridFunction(grid);
  const auto v = solver.eigenvectors().col(0);
  const double sign = v.sum() < 0.0 ? -1.0 : 1.0;
  for (std::size_t i = 0; i < n; ++i) out.mode[i] = sign * v[static_cast<Eigen::Index>(i)];
  out.mode *= 1.0 / out.mode.norm();
  return out;
}

}  // namespace

double beta_ratio(const SpatialGrid& grid, const ControlRegion& region, const Potential& potential,
                  double t, double T, const GridFunction& z, double time_step) {
  if (!(time_step > 0.0)) throw ConfigurationError("time step must be positive");
  return RatioProblem(grid, region, potential, t, T, time_step).ratio(z);
}

BetaEstimate beta_estimate(double t, double T, const SpatialGrid& grid, const ControlRegion& region,
                           const Potential& potential, std::size_t trials,
                           const BetaOptions& options) {
  if (!(t >= 0.0 && t < T)) throw DomainError("beta needs 0 <= t < T");
  if (trials < 1) throw ConfigurationError("beta estimate needs at least one trial");
  if (!(options.time_step > 0.0)) throw ConfigurationError("time step must be positive");
  potential.check_horizon(T);
  const RatioProblem problem(grid, region, potential, t, T, options.time_step);

  BetaEstimate out;
  out.t = t;
  out.T = T;
  const LowestMode lowest = lowest_mode(grid, potential, T);
  out.lambda1 = lowest.lambda;
  const double gap = T - t;
  out.single_mode_formula = lowest.lambda == 0.0 ? 1.0 / gap
                                                 : lowest.lambda / std::expm1(lowest.lambda * gap);
  out.single_mode_ratio = problem.ratio(lowest.mode);

  std::vector<GridFunction> starts;
  starts.push_back(lowest.mode);
  for (const GridFunction& s : options.seeds) {
    if (s.size() != grid.size()) throw ConfigurationError("seed has the wrong size");
    if (!s.is_zero()) starts.push_back(s);
  }
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t k = 0; k < trials; ++k) {
    GridFunction z(grid);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = normal(rng);
    starts.push_back(std::move(z));
  }
  out.trials = starts.size();

  std::vector<Ascent> results(starts.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr failure;
  auto worker = [&]() {
    for (std::size_t i = next++; i < starts.size() && !failed; i = next++) {
      try {
        results[i] = ascend(problem, starts[i], options);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const std::size_t count = std::clamp<std::size_t>(options.threads, 1, starts.size());
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < count; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].value > results[best].value) best = i;
  out.value = std::max(results[best].value, out.single_mode_ratio);
  out.maximizer = results[best].value >= out.single_mode_ratio ? results[best].z : lowest.mode;
  if (!(out.value > 0.0)) throw InconsistencyError("beta estimate is not positive");
  return out;
}

std::vector<BetaEstimate> beta_sweep(double t, const std::vector<double>& horizons,
                                     const SpatialGrid& grid, const ControlRegion& region,
                                     const Potential& potential, std::size_t trials,
                                     const BetaOptions& options,
                                     const std::vector<BetaEstimate>* cross) {
  if (horizons.empty()) throw ConfigurationError("beta sweep needs at least one horizon");
  if (cross && cross->size() != horizons.size())
    throw ConfigurationError("cross seeds must match the horizons");
  std::vector<std::size_t> order(horizons.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return horizons[a] > horizons[b]; });
  for (std::size_t k = 1; k < order.size(); ++k)
    if (!(horizons[order[k]] < horizons[order[k - 1]]))
      throw ConfigurationError("horizons must be distinct");

  std::vector<BetaEstimate> out(horizons.size());
  const BetaEstimate* previous = nullptr;
  for (std::size_t i : order) {
    BetaOptions opt = options;
    if (cross) opt.seeds.push_back((*cross)[i].maximizer);
    if (previous) {
      // phi(T_i; T_prev, z_prev): its ratio on [t, T_i] is at least the previous value.
      const HeatSystem sys(grid, region, potential,
                           TimeMesh(previous->T, whole_steps(previous->T, options.time_step,
                                                             "horizon T")));
      const std::size_t node = whole_steps(horizons[i], options.time_step, "horizon T");
      opt.seeds.push_back(sys.adjoint(previous->maximizer).at(node));
    }
    out[i] = beta_estimate(t, horizons[i], grid, region, potential, trials, opt);
    previous = &out[i];
  }
  return out;
}

double beta_bound(double gap, double c0) { return std::exp((1.0 + 1.0 / gap) * c0); }

BetaBoundFit beta_bound_fit(const std::vector<BetaSample>& samples) {
  if (samples.size() < 4) throw ConfigurationError("bound fit needs at least 4 samples");
  std::vector<double> gaps;
  for (const BetaSample& s : samples) {
    if (!(s.T > s.t)) throw DomainError("samples need T > t");
    if (!(s.beta > 0.0)) throw DomainError("samples need beta > 0");
    gaps.push_back(s.T - s.t);
  }
  std::sort(gaps.begin(), gaps.end());
  if (std::adjacent_find(gaps.begin(), gaps.end(), [](double a, double b) {
        return std::abs(a - b) <= 1e-12 * std::max(a, b);
      }) != gaps.end())
    throw ConfigurationError("bound fit needs samples with distinct gaps T - t");

  BetaBoundFit fit;
  fit.samples = samples;
  fit.c0 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double c = std::log(samples[i].beta) / (1.0 + 1.0 / (samples[i].T - samples[i].t));
    if (c > fit.c0) {
      fit.c0 = c;
      fit.argmax = i;
    }
  }
  fit.holds = true;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double bound = beta_bound(samples[i].T - samples[i].t, fit.c0);
    const double r = i == fit.argmax ? 0.0 : std::max(0.0, 1.0 - samples[i].beta / bound);
    fit.residuals.push_back(r);
    fit.max_residual = std::max(fit.max_residual, r);
    if (!(samples[i].beta <= bound * (1.0 + 1e-9))) fit.holds = false;
  }
  return fit;
}

}  // namespace heatctl
