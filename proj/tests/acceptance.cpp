// Acceptance suite: twelve end-to-end criteria, each checked against an oracle
// computed here from first principles (closed forms, hand-assembled Gramians,
// finite differences) and against its runtime budget. Prints one PASS/FAIL line
// per criterion; the exit status is nonzero if any criterion fails.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "heatctl/attainable.hpp"
#include "heatctl/dual.hpp"
#include "heatctl/norm_value.hpp"
#include "heatctl/observability.hpp"
#include "heatctl/time_optimal.hpp"
#include "support.hpp"

using namespace heatctl;
using heatctl::testing::cn_factor;
using heatctl::testing::continuum_mode_norm;
using heatctl::testing::discrete_eigenvalue;
using heatctl::testing::discrete_mode_norm;
using heatctl::testing::random_control;
using heatctl::testing::random_function;
using heatctl::testing::relative_difference;
using heatctl::testing::unit_mode;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ------------------------------------------------------------------ oracles

// sum_j w_j <u_j, s_j>_omega with trapezoid weights, written out.
double pairing(const SpaceTimeField& u, const SpaceTimeField& s, const ControlRegion& region,
               double h) {
  const TimeMesh& mesh = u.mesh();
  double total = 0.0;
  for (std::size_t j = 0; j <= mesh.steps(); ++j) {
    const double w = (j == 0 || j == mesh.steps()) ? 0.5 * mesh.dt() : mesh.dt();
    double inner = 0.0;
    for (std::size_t i = region.first(); i < region.last(); ++i)
      inner += u.state(j)[i] * s.state(j)[i];
    total += w * h * inner;
  }
  return total;
}

// Per-node L2(omega) norms and their trapezoid L^r norm in time.
std::vector<double> omega_profile(const SpaceTimeField& f, const ControlRegion& region, double h) {
  std::vector<double> out(f.time_nodes());
  for (std::size_t j = 0; j < out.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = region.first(); i < region.last(); ++i) s += f.state(j)[i] * f.state(j)[i];
    out[j] = std::sqrt(h * s);
  }
  return out;
}

double lebesgue(const std::vector<double>& profile, const TimeMesh& mesh, double r) {
  if (std::isinf(r)) return *std::max_element(profile.begin(), profile.end());
  double s = 0.0;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    const double w = (j == 0 || j + 1 == profile.size()) ? 0.5 * mesh.dt() : mesh.dt();
    s += w * std::pow(profile[j], r);
  }
  return std::pow(s, 1.0 / r);
}

// Dense q = 2 minimizer from adjoint trajectories of the unit vectors:
// J(z) = 1/2 z'Az + h b'z with A_kl = sum_j w_j h <chi phi_k(t_j), chi phi_l(t_j)>.
GridFunction dense_minimizer(const HeatSystem& sys, const GridFunction& y0) {
  const std::size_t n = sys.grid().size();
  const double h = sys.grid().h();
  std::vector<Trajectory> basis;
  for (std::size_t k = 0; k < n; ++k) {
    GridFunction e(sys.grid());
    e[k] = 1.0;
    basis.push_back(sys.adjoint(e));
  }
  Eigen::MatrixXd A(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l <= k; ++l)
      A(k, l) = A(l, k) = pairing(basis[k], basis[l], sys.region(), h);
  const GridFunction b = sys.forward_final(y0);
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs(i) = -h * b[i];
  const Eigen::VectorXd z = A.ldlt().solve(rhs);
  GridFunction out(sys.grid());
  for (std::size_t i = 0; i < n; ++i) out[i] = z(i);
  return out;
}

GridFunction smooth_state(const SpatialGrid& grid) {
  return GridFunction::sample(grid, [](double x) {
    return std::sin(kPi * x) + 0.5 * std::sin(2.0 * kPi * x) + 0.25 * std::sin(3.0 * kPi * x);
  });
}

Potential bangbang_potential(const SpatialGrid& grid) {
  return Potential::separable(
      grid, [](double x) { return 2.0 * std::sin(2.0 * kPi * x); },
      TimeProfile::function([](double t) { return std::cos(t); }));
}

std::shared_ptr<const HeatSystem> interior_system(std::size_t n, std::size_t m, double T) {
  const SpatialGrid grid(1.0, n);
  return std::make_shared<const HeatSystem>(grid, ControlRegion(grid, 0.3, 0.7),
                                            Potential::zero(grid), TimeMesh(T, m));
}

// ------------------------------------------------------------------ criteria

Outcome duality() {
  Outcome o;
  const SpatialGrid grid(1.0, 50);
  const ControlRegion region(grid, 0.3, 0.7);
  const TimeMesh mesh(0.5, 100);
  std::mt19937_64 rng(101);
  const std::vector<Potential> potentials{
      Potential::zero(grid), bangbang_potential(grid),
      Potential::general(grid, [](double x, double t) { return 3.0 * x * std::cos(4.0 * t); })};
  double worst = 0.0;
  for (const Potential& a : potentials) {
    const HeatSystem sys(grid, region, a, mesh);
    for (int k = 0; k < 20; ++k) {
      const ControlSignal v = random_control(grid, mesh, region, rng);
      const GridFunction z = random_function(grid, rng);
      const double lhs = sys.forward_final(sys.zero_state(), &v).inner(z);
      const Trajectory phi = sys.adjoint(z);
      const double rhs = pairing(v, phi, region, grid.h());
      const double scale = std::abs(lhs) + lebesgue(omega_profile(v, region, grid.h()), mesh, 2) *
                                               lebesgue(omega_profile(phi, region, grid.h()), mesh, 2);
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
  }
  o.note("max relative residual " + fmt(worst) + " over 3 potentials x 20 pairs");
  o.require(worst <= 1e-12, "residual <= 1e-12");
  return o;
}

Outcome closed_form() {
  Outcome o;
  const SpatialGrid grid(1.0, 200);
  const HeatModel model{grid, ControlRegion::whole(grid), Potential::zero(grid), 400};
  const NormValue v = norm_value(model, 0.1, unit_mode(grid), 2.0, SolverConfig{});
  const double expected = continuum_mode_norm(0.1);
  const double err = relative_difference(v.value, expected);
  o.note("N2 = " + fmt(v.value) + ", closed form " + fmt(expected) + ", rel err " + fmt(err));
  o.require(v.diagnostics.converged, "converged");
  o.require(err <= 1e-3, "relative error <= 1e-3");
  return o;
}

Outcome gramian() {
  Outcome o;
  const auto sys = interior_system(20, 40, 0.5);
  std::mt19937_64 rng(103);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    const GridFunction y0 = random_function(sys->grid(), rng);
    const MinimizerResult cg = minimize_J(DualProblem::null_control(sys, y0, 2.0), SolverConfig{});
    const GridFunction dense = dense_minimizer(*sys, y0);
    o.require(cg.converged, "CG converged");
    worst = std::max(worst, (cg.z_hat - dense).norm() / dense.norm());
  }
  o.note("max relative distance " + fmt(worst) + " over 3 random y0");
  o.require(worst <= 1e-10, "agreement <= 1e-10");
  return o;
}

Outcome value_identity() {
  Outcome o;
  const auto sys = interior_system(20, 40, 0.5);
  std::mt19937_64 rng(104);
  const GridFunction y0 = random_function(sys->grid(), rng);
  const SolverConfig cfg;
  for (double q : {1.5, 2.0, 3.0}) {
    const MinimizerResult r = minimize_J(DualProblem::null_control(sys, y0, q), cfg);
    const ControlSignal u = control_from_minimizer(r);
    const double N = std::sqrt(std::max(-2.0 * r.value, 0.0));
    const double primal =
        lebesgue(omega_profile(u, ControlRegion::whole(sys->grid()), sys->grid().h()), sys->mesh(),
                 conjugate_exponent(q));
    const double gap = std::abs(N - primal) / N;
    const double steered = sys->forward_final(y0, &u).norm() / y0.norm();
    o.note("q=" + fmt(q) + ": gap " + fmt(gap) + ", null residual " + fmt(steered));
    o.require(r.converged, "converged at q=" + fmt(q));
    o.require(gap <= 10.0 * cfg.tolerance, "gap <= 10 tol at q=" + fmt(q));
  }
  return o;
}

Outcome gradient() {
  Outcome o;
  const auto sys = interior_system(20, 40, 0.5);
  std::mt19937_64 rng(105);
  const GridFunction y0 = random_function(sys->grid(), rng);
  const SolverConfig cfg;
  const double h = sys->grid().h();
  double worst = 0.0;
  for (double q : {1.5, 2.0, 3.0}) {
    const DualProblem problem = DualProblem::null_control(sys, y0, q);
    for (int k = 0; k < 5; ++k) {
      const GridFunction z = random_function(sys->grid(), rng);
      const GridFunction g = grad_J(problem, z, cfg);
      const double eps = 1e-5 * z.norm();
      double diff = 0.0, ref = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        GridFunction plus = z, minus = z;
        plus[i] += eps;
        minus[i] -= eps;
        const double fd = (evaluate_J(problem, plus, cfg) - evaluate_J(problem, minus, cfg)) /
                          (2.0 * eps);
        diff += (fd - h * g[i]) * (fd - h * g[i]);
        ref += (h * g[i]) * (h * g[i]);
      }
      worst = std::max(worst, std::sqrt(diff / ref));
    }
  }
  o.note("max relative error " + fmt(worst) + " over q in {1.5, 2, 3} x 5 z");
  o.require(worst <= 1e-5, "relative error <= 1e-5");
  return o;
}

Outcome monotonicity() {
  Outcome o;
  const SpatialGrid grid(1.0, 50);
  const HeatModel model{grid, ControlRegion(grid, 0.3, 0.7), Potential::zero(grid), 100, 0.005};
  const GridFunction y0 = smooth_state(grid);
  const std::vector<double> horizons{0.05, 0.075, 0.1, 0.2, 0.4, 0.8, 1.2, 1.6};
  const NormCurve curve = norm_curve(model, y0, 2.0, horizons, SolverConfig{}, 4);
  o.require(!curve.partial, "all samples converged");
  double margin = kInf;
  for (std::size_t i = 1; i < curve.samples.size(); ++i) {
    const double rel = 1.0 - curve.samples[i].value / curve.samples[i - 1].value;
    margin = std::min(margin, rel);
  }
  o.note("smallest relative decrease " + fmt(margin));
  o.require(margin > 1e-9, "strict decrease with margin 1e-9");
  // Halving the two smallest horizons increases the norm.
  for (std::size_t i = 0; i < 2; ++i) {
    const double T = horizons[i];
    const double half = norm_value(model, 0.5 * T, y0, 2.0, SolverConfig{}).value;
    o.note("N(" + fmt(0.5 * T) + ")/N(" + fmt(T) + ") = " + fmt(half / curve.samples[i].value));
    o.require(half > curve.samples[i].value, "N grows as T halves from " + fmt(T));
  }
  return o;
}

Outcome bisection() {
  Outcome o;
  const double T_true = 0.2;
  const SolverConfig cfg;
  // Whole interval, single mode: M from the exact discrete curve.
  {
    const SpatialGrid grid(1.0, 30);
    const HeatModel model{grid, ControlRegion::whole(grid), Potential::zero(grid), 60};
    TimeOptimalQuery query;
    query.bound = discrete_mode_norm(grid, T_true, 60);
    query.y0 = unit_mode(grid);
    const TimeOptimalResult r = time_optimal_solve(model, query, cfg);
    const double t_err = relative_difference(r.t_star, T_true);
    const double m_err = std::abs(r.at_star.value - query.bound) / query.bound;
    o.note("single mode: T err " + fmt(t_err) + ", M err " + fmt(m_err));
    o.require(r.converged && t_err <= 1e-3 && m_err <= 1e-4, "single-mode round trip");
  }
  // Interior control set, p in {2, 4}: M = N_p(0.2) from the solver.
  const SpatialGrid grid(1.0, 20);
  const HeatModel model{grid, ControlRegion(grid, 0.3, 0.7), Potential::zero(grid), 40};
  for (double p : {2.0, 4.0}) {
    TimeOptimalQuery query;
    query.p = p;
    query.y0 = smooth_state(grid);
    query.bound = norm_value(model, T_true, query.y0, p, cfg).value;
    const TimeOptimalResult r = time_optimal_solve(model, query, cfg);
    const double t_err = relative_difference(r.t_star, T_true);
    const double m_err = std::abs(r.at_star.value - query.bound) / query.bound;
    o.note("omega interior p=" + fmt(p) + ": T err " + fmt(t_err) + ", M err " + fmt(m_err));
    o.require(r.converged && t_err <= 1e-3 && m_err <= 1e-4, "round trip at p=" + fmt(p));
  }
  return o;
}

Outcome bangbang() {
  Outcome o;
  const SpatialGrid grid(1.0, 20);
  const HeatModel model{grid, ControlRegion(grid, 0.3, 0.7), bangbang_potential(grid), 40};
  const GridFunction y0 = smooth_state(grid);
  const SolverConfig cfg;
  for (double p : {2.0, 4.0, kInf}) {
    TimeOptimalQuery query;
    query.y0 = y0;
    query.p = p;
    query.bound = norm_value(model, 0.5, y0, p, cfg).value;
    const TimeOptimalResult r = time_optimal_solve(model, query, cfg);
    o.require(r.converged, "converged at p=" + fmt(p));
    // Recompute the diagnostics from the control profile.
    const std::vector<double> profile = omega_profile(r.control(), model.region, grid.h());
    const TimeMesh& mesh = r.control().mesh();
    const std::size_t last = static_cast<std::size_t>(std::floor(0.95 * mesh.steps()));
    double lo = kInf, flat = 0.0;
    for (std::size_t j = 0; j <= last; ++j) {
      lo = std::min(lo, profile[j]);
      flat = std::max(flat, std::abs(profile[j] - query.bound) / query.bound);
    }
    if (std::isinf(p)) {
      o.note("p=inf: flatness " + fmt(flat));
      o.require(flat <= 5e-2, "flatness <= 5e-2 at p=inf");
    } else {
      const double sat = std::abs(lebesgue(profile, mesh, p) - query.bound) / query.bound;
      o.note("p=" + fmt(p) + ": saturation " + fmt(sat) + ", min profile " + fmt(lo));
      o.require(sat <= 1e-3, "saturation <= 1e-3 at p=" + fmt(p));
      o.require(lo > 0.0, "nonvanishing profile at p=" + fmt(p));
    }
  }
  return o;
}

Outcome hq_roundtrip() {
  Outcome o;
  const auto sys = interior_system(20, 40, 0.5);
  std::mt19937_64 rng(109);
  const double h = sys->grid().h();
  for (double q : {1.5, 2.0, 3.0}) {
    const XiElement xi(sys, random_function(sys->grid(), rng), q);
    const ControlSignal u = u_xi(xi);
    const double xi_norm =
        lebesgue(omega_profile(sys->adjoint(xi.z()), sys->region(), h), sys->mesh(), q);
    const double u_norm = lebesgue(omega_profile(u, sys->region(), h), sys->mesh(),
                                   conjugate_exponent(q));
    const double identity = std::abs(u_norm - xi_norm) / xi_norm;
    const RoundTrip r = roundtrip(xi, SolverConfig{});
    o.note("q=" + fmt(q) + ": identity " + fmt(identity) + ", recovered " +
           fmt(r.recovered_error) + ", attainable gap " + fmt(r.attainable_gap));
    o.require(identity <= 1e-12, "norm identity at q=" + fmt(q));
    o.require(r.converged && r.recovered_error <= 1e-3, "recovered xi at q=" + fmt(q));
    o.require(r.attainable_gap <= 1e-3, "attainable gap at q=" + fmt(q));
  }
  return o;
}

Outcome gauge_and_shift() {
  Outcome o;
  const SpatialGrid grid(1.0, 20);
  const ControlRegion region(grid, 0.3, 0.7);
  const TimeMesh mesh(0.5, 80);
  const Potential full = bangbang_potential(grid);
  std::mt19937_64 rng(110);
  const GridFunction z = random_function(grid, rng);

  // Adjoint of a1 + a2 times exp(int_t^T a2) (midpoint sums, as in the stepping),
  // against the adjoint of a1 alone.
  const Trajectory with_a2 = solve_adjoint(grid, region, full, z, mesh);
  const Trajectory a1_only = solve_adjoint(grid, region, full.spatial_part(), z, mesh);
  double diff = 0.0, ref = 0.0, tail = 0.0;
  for (std::size_t j = mesh.steps() + 1; j-- > 0;) {
    if (j < mesh.steps()) tail += mesh.dt() * std::cos(mesh.midpoint(j));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double d = std::exp(tail) * with_a2.state(j)[i] - a1_only.state(j)[i];
      diff += d * d;
      ref += a1_only.state(j)[i] * a1_only.state(j)[i];
    }
  }
  const double gauge = std::sqrt(diff / ref);
  o.note("gauge residual " + fmt(gauge));
  o.require(gauge <= 1e-6, "gauge residual <= 1e-6");

  const std::vector<double> fractions{0.2, 0.1, 0.05, 0.025};
  const auto sys = std::make_shared<const HeatSystem>(grid, region, full, mesh);
  for (double q : {1.5, 2.0, 3.0}) {
    const ShiftDensity s = shift_density_check(XiElement(sys, z, q), fractions);
    bool strict = true;
    for (std::size_t k = 1; k < s.residuals.size(); ++k)
      strict = strict && s.residuals[k] < s.residuals[k - 1];
    o.note("q=" + fmt(q) + ": residuals " + fmt(s.residuals.front()) + " -> " +
           fmt(s.residuals.back()));
    o.require(strict, "strictly decreasing shift residuals at q=" + fmt(q));
  }
  return o;
}

Outcome observability() {
  Outcome o;
  const SpatialGrid grid(1.0, 20);
  BetaOptions opt;
  opt.seed = 111;
  opt.threads = 4;
  const std::vector<double> horizons{0.1, 0.2, 0.4, 0.8, 1.6};

  // Whole interval, no potential: the discrete single-mode ratio, written out.
  const double lambda = discrete_eigenvalue(grid);
  for (double gap : horizons) {
    const BetaEstimate e =
        beta_estimate(0.0, gap, grid, ControlRegion::whole(grid), Potential::zero(grid), 3, opt);
    const auto m = static_cast<std::size_t>(std::llround(gap / opt.time_step));
    const double rho = cn_factor(lambda, opt.time_step);
    double denom = 0.0;
    for (std::size_t j = 0; j <= m; ++j)
      denom += ((j == 0 || j == m) ? 0.5 : 1.0) * opt.time_step *
               std::pow(rho, static_cast<double>(m - j));
    const double bound = std::pow(rho, static_cast<double>(m)) / denom;
    o.require(e.value >= bound * (1.0 - 1e-12), "single-mode lower bound at gap " + fmt(gap));
  }
  o.note("single-mode lower bound respected on 5 gaps");

  const ControlRegion region(grid, 0.3, 0.7);
  const std::vector<BetaEstimate> plain =
      beta_sweep(0.0, horizons, grid, region, Potential::zero(grid), 3, opt);
  const Potential strong =
      Potential::separable(grid, std::vector<double>(grid.size(), 0.0), TimeProfile::constant(-5.0));
  const std::vector<BetaEstimate> with_a =
      beta_sweep(0.0, horizons, grid, region, strong, 3, opt, &plain);
  std::vector<BetaSample> s0, s5;
  bool decreasing = true;
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (i > 0) decreasing = decreasing && plain[i].value < plain[i - 1].value &&
                            with_a[i].value < with_a[i - 1].value;
    s0.push_back({0.0, horizons[i], plain[i].value});
    s5.push_back({0.0, horizons[i], with_a[i].value});
  }
  o.require(decreasing, "beta decreasing in T");
  const BetaBoundFit f0 = beta_bound_fit(s0);
  const BetaBoundFit f5 = beta_bound_fit(s5);
  // The bound is checked here directly: beta_i <= exp((1 + 1/gap_i) C0).
  const auto holds = [](const std::vector<BetaSample>& s, double c0) {
    for (const BetaSample& b : s)
      if (b.beta > std::exp((1.0 + 1.0 / (b.T - b.t)) * c0) * (1.0 + 1e-9)) return false;
    return true;
  };
  o.note("C0 = " + fmt(f0.c0) + " (a = 0), " + fmt(f5.c0) + " (|a| = 5)");
  o.require(holds(s0, f0.c0) && holds(s5, f5.c0), "fitted bound holds on all samples");
  o.require(f5.c0 >= f0.c0, "C0 non-decreasing as |a| grows from 0 to 5");
  return o;
}

Outcome q1_uniqueness() {
  Outcome o;
  const auto sys = interior_system(20, 40, 0.5);
  std::mt19937_64 rng(112);
  const GridFunction y0 = random_function(sys->grid(), rng);
  SolverConfig cfg;
  cfg.starts = 5;
  cfg.seed = 12;
  const MinimizerResult r = minimize_J(DualProblem::null_control(sys, y0, 1.0), cfg);
  o.note("converged starts " + std::to_string(r.converged_starts) + "/5, agreement " +
         fmt(r.starts_agreement) + ", smoothing " + fmt(r.smoothing));
  o.require(r.converged && r.converged_starts == 5, "all starts converged");
  o.require(r.starts_agreement <= 1e-3, "controls agree within 1e-3");
  return o;
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"1  discrete duality", 5, duality},
      {"2  single-mode closed form", 30, closed_form},
      {"3  Gramian equivalence", 60, gramian},
      {"4  value/norm identity", 120, value_identity},
      {"5  gradient vs central differences", 60, gradient},
      {"6  strict monotonicity of the norm curve", 180, monotonicity},
      {"7  bisection round trip", 180, bisection},
      {"8  bang-bang diagnostics", 300, bangbang},
      {"9  H_q round trip", 120, hq_roundtrip},
      {"10 gauge equivalence and shift density", 120, gauge_and_shift},
      {"11 observability estimates and bound", 300, observability},
      {"12 q = 1 multi-start agreement", 180, q1_uniqueness},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > c.budget_s) o.require(false, "runtime budget " + fmt(c.budget_s) + " s");
    if (!o.passed) ++failures;
    std::printf("%s  %-44s %7.2f s  %s\n", o.passed ? "PASS" : "FAIL", c.name, elapsed,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
