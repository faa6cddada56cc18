#include "commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>

#include "heatctl/attainable.hpp"
#include "heatctl/errors.hpp"
#include "heatctl/norm_value.hpp"
#include "heatctl/observability.hpp"
#include "heatctl/time_optimal.hpp"

namespace heatctl::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Shortest round-trip representation: identical inputs give identical bytes.
std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(num(v)); }

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    write(header);
  }
  void row(const std::vector<std::string>& cells) { write(cells); }

 private:
  void write(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    out_.flush();
  }
  std::ofstream out_;
};

std::string flag(bool b) { return b ? "1" : "0"; }

struct Context {
  const ExperimentConfig& config;
  fs::path dir;
  std::size_t threads = 1;
  json payload = json::object();
  bool converged = true;
  std::vector<std::string> failures;
  std::vector<std::string> artifacts;

  fs::path file(const std::string& name) {
    artifacts.push_back(name);
    return dir / name;
  }
  void check(const std::string& what, bool ok) {
    if (!ok) failures.push_back(what);
  }
  void write_json(const std::string& name, const json& j) {
    std::ofstream out(file(name));
    out << j.dump(2) << '\n';
  }
};

GridFunction random_direction(const SpatialGrid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  GridFunction f(grid);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = normal(rng);
  return f;
}

std::string verdict_label(const ExperimentConfig& c, bool verdict) {
  if (c.potential.kind == "general") return "conditional";
  return verdict ? "confirmed" : "failed";
}

// ------------------------------------------------------------------ commands

void cmd_forward(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const auto sys = c.system();
  const GridFunction y0 = c.initial();
  const Trajectory y = sys->forward(y0);
  Csv csv(ctx.file("forward.csv"), {"t", "state_norm", "restricted_norm"});
  const std::vector<double> full = y.profile();
  const std::vector<double> part = y.restricted_profile(sys->region());
  for (std::size_t j = 0; j < full.size(); ++j)
    csv.row({num(sys->mesh().t(j)), num(full[j]), num(part[j])});
  ctx.payload = {{"T", c.horizon}, {"initial_norm", full.front()}, {"final_norm", full.back()}};
}

void cmd_min_norm(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const NormValue v = norm_value(c.model(), c.horizon, c.initial(), c.p, c.solver);
  const NormDiagnostics& d = v.diagnostics;
  const json j = {{"T", c.horizon},
                  {"p", jnum(c.p)},
                  {"N_p", v.value},
                  {"converged", d.converged},
                  {"primal_norm", d.primal_norm},
                  {"primal_dual_gap", d.primal_dual_gap},
                  {"null_residual", d.null_residual},
                  {"relative_gradient", d.relative_gradient},
                  {"smoothing", d.smoothing},
                  {"iterations", d.iterations},
                  {"message", d.message}};
  ctx.write_json("min_norm.json", j);
  Csv csv(ctx.file("control.csv"), {"t", "control_norm"});
  const std::vector<double> profile = v.control.profile();
  for (std::size_t k = 0; k < profile.size(); ++k)
    csv.row({num(v.control.mesh().t(k)), num(profile[k])});
  ctx.payload = j;
  ctx.converged = d.converged;
  // On fine grids with an interior control set the Gramian is so ill conditioned that the
  // identity is only met to about 1e-6 even at a tight gradient tolerance.
  const double identity = std::max(10.0 * c.solver.tolerance, 1e-5);
  ctx.payload["identity_threshold"] = identity;
  ctx.check("primal_dual_gap <= max(10 tol, 1e-5)", d.primal_dual_gap <= identity);
  ctx.check("null_residual <= 1e-6", d.null_residual <= 1e-6);
}

void cmd_norm_curve(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const NormCurve curve =
      norm_curve(c.model(), c.initial(), c.p, c.curve_horizons, c.solver, ctx.threads);
  Csv csv(ctx.file("norm_curve.csv"), {"T", "N_p", "converged", "primal_dual_gap"});
  for (const NormSample& s : curve.samples)
    csv.row({num(s.horizon), num(s.value), flag(s.converged), num(s.primal_dual_gap)});
  ctx.payload = {{"p", jnum(c.p)},
                 {"monotone", curve.monotone},
                 {"partial", curve.partial},
                 {"first_violation", curve.monotone ? json(nullptr) : json(curve.first_violation)}};
  ctx.converged = !curve.partial;
  ctx.check("strictly decreasing in T", curve.monotone);
}

void cmd_time_optimal(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const TimeOptimalBlock& b = c.time_optimal;
  if (b.bounds.empty()) throw ConfigError(c.path + ": time_optimal.bounds: must not be empty");
  const HeatModel model = c.model();
  const GridFunction y0 = c.initial();

  std::optional<double> nhat = b.nhat;
  if (!nhat && !b.nhat_horizons.empty()) {
    const NormCurve curve = norm_curve(model, y0, c.p, b.nhat_horizons, c.solver, ctx.threads);
    const NhatEstimate e = nhat_estimate(curve);
    ctx.payload["nhat_estimate"] = {{"value", e.value},
                                    {"plateau_residual", e.plateau_residual},
                                    {"converged", e.converged}};
    // Only a settled plateau is a trustworthy limit; otherwise the minimum is an upper bound.
    if (e.converged) nhat = e.value;
  }

  json results = json::array();
  for (double M : b.bounds) {
    TimeOptimalQuery query;
    query.bound = M;
    query.p = c.p;
    query.y0 = y0;
    query.t_hi = b.t_hi;
    query.t_lo = b.t_lo;
    query.tolerance = b.tolerance;
    query.nhat = nhat;
    try {
      const TimeOptimalResult r = time_optimal_solve(model, query, c.solver);
      results.push_back({{"M", M},
                         {"p", jnum(c.p)},
                         {"T_star", r.t_star},
                         {"saturation_residual", r.report.saturation_residual},
                         {"flatness_residual", r.report.flatness_residual},
                         {"verdict", r.report.verdict},
                         {"null_residual", r.null_residual},
                         {"converged", r.converged},
                         {"bisections", r.bisections},
                         {"label", verdict_label(c, r.report.verdict)}});
      ctx.converged = ctx.converged && r.converged;
    } catch (const NoOptimalControl& e) {
      results.push_back({{"M", M},
                         {"p", jnum(c.p)},
                         {"error", "NoOptimalControl"},
                         {"limit", e.limit},
                         {"message", e.what()}});
      ctx.converged = false;
    } catch (const BracketError& e) {
      results.push_back({{"M", M},
                         {"p", jnum(c.p)},
                         {"error", "BracketError"},
                         {"norm_at_lo", e.norm_at_lo},
                         {"norm_at_hi", e.norm_at_hi},
                         {"message", e.what()}});
      ctx.converged = false;
    }
  }
  ctx.write_json("time_optimal.json", results);
  ctx.payload["results"] = results;
}

void cmd_bangbang(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const HeatModel model = c.model();
  const GridFunction y0 = c.initial();
  const double Tref = c.bangbang.horizon;
  Csv table(ctx.file("bangbang.csv"), {"p", "M", "T_star", "saturation_residual",
                                       "flatness_residual", "min_profile", "verdict", "label"});
  Csv profiles(ctx.file("bangbang_profile.csv"), {"p", "t", "control_norm"});
  json rows = json::array();
  for (double p : c.bangbang.exponents) {
    const NormValue ref = norm_value(model, Tref, y0, p, c.solver);
    ctx.converged = ctx.converged && ref.diagnostics.converged;
    TimeOptimalQuery query;
    query.bound = ref.value;
    query.p = p;
    query.y0 = y0;
    query.t_hi = 2.0 * Tref;
    const TimeOptimalResult r = time_optimal_solve(model, query, c.solver);
    ctx.converged = ctx.converged && r.converged;
    const std::string label = verdict_label(c, r.report.verdict);
    table.row({num(p), num(ref.value), num(r.t_star), num(r.report.saturation_residual),
               num(r.report.flatness_residual), num(r.report.min_profile), flag(r.report.verdict),
               label});
    const std::vector<double> profile = r.control().profile();
    for (std::size_t k = 0; k < profile.size(); ++k)
      profiles.row({num(p), num(r.control().mesh().t(k)), num(profile[k])});
    rows.push_back({{"p", jnum(p)}, {"T_star", r.t_star}, {"verdict", r.report.verdict},
                    {"label", label}});
    if (label != "conditional") ctx.check("bang-bang verdict at p = " + num(p), r.report.verdict);
    ctx.check("T_star recovers the reference horizon at p = " + num(p),
              std::abs(r.t_star - Tref) <= 1e-2 * Tref);
  }
  ctx.payload = {{"reference_horizon", Tref}, {"results", rows}};
}

void cmd_attainable(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const auto sys = c.system();
  std::mt19937_64 rng(c.seed);
  Csv csv(ctx.file("attainable_roundtrip.csv"),
          {"q", "xi_norm", "u_norm", "recovered_err", "attainable_gap"});
  double worst_identity = 0.0, worst_recovered = 0.0, worst_gap = 0.0;
  for (double q : c.attainable.exponents) {
    for (std::size_t s = 0; s < c.attainable.samples; ++s) {
      const XiElement xi(sys, random_direction(sys->grid(), rng), q);
      const RoundTrip r = roundtrip(xi, c.solver);
      csv.row({num(q), num(r.xi_norm), num(r.control_norm), num(r.recovered_error),
               num(r.attainable_gap)});
      ctx.converged = ctx.converged && r.converged;
      worst_identity = std::max(worst_identity, r.norm_identity_gap);
      worst_recovered = std::max(worst_recovered, r.recovered_error);
      worst_gap = std::max(worst_gap, r.attainable_gap);
    }
  }
  ctx.payload = {{"max_norm_identity_gap", worst_identity},
                 {"max_recovered_error", worst_recovered},
                 {"max_attainable_gap", worst_gap}};
  ctx.check("||u_xi||_p = ||xi||_q to 1e-12", worst_identity <= 1e-12);
  ctx.check("recovered xi within 1e-3", worst_recovered <= 1e-3);
  ctx.check("attainable norm within 1e-3", worst_gap <= 1e-3);
}

void cmd_shift_density(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const auto sys = c.system();
  std::mt19937_64 rng(c.seed);
  const GridFunction z = random_direction(sys->grid(), rng);
  const XiElement xi(sys, z, c.shift.q);
  const ShiftDensity r = shift_density_check(xi, c.shift.fractions);
  Csv csv(ctx.file("shift_density.csv"), {"fraction", "residual"});
  for (std::size_t k = 0; k < r.fractions.size(); ++k)
    csv.row({num(r.fractions[k]), num(r.residuals[k])});
  ctx.payload = {{"q", jnum(c.shift.q)}, {"decreasing", r.decreasing}};
  if (r.fractions.size() > 1) ctx.check("residuals decrease with the shift", r.decreasing);
  if (!sys->potential().a2().is_zero()) {
    const double g = gauge_residual(*sys, z);
    ctx.payload["gauge_residual"] = g;
    ctx.check("gauge residual <= 1e-6", g <= 1e-6);
  }
}

Potential shifted_potential(const ExperimentConfig& c, double shift) {
  const SpatialGrid grid = c.grid();
  const Potential base = c.build_potential();
  if (base.kind() == Potential::Kind::General) {
    std::vector<std::vector<double>> rows = c.potential.rows;
    for (auto& row : rows)
      for (double& v : row) v += shift;
    return Potential::general_table(grid, c.potential.table_spacing, rows);
  }
  std::vector<double> a1 = base.a1();
  if (a1.empty()) a1.assign(grid.size(), 0.0);
  const TimeProfile old = base.a2();
  return Potential::separable(grid, std::move(a1),
                              TimeProfile::function([old, shift](double t) { return old(t) + shift; }));
}

void cmd_observability(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  const ObservabilityBlock& b = c.observability;
  const SpatialGrid grid = c.grid();
  const ControlRegion region = c.region();
  BetaOptions opt;
  opt.time_step = b.time_step;
  opt.max_iterations = b.max_iterations;
  opt.seed = c.seed;
  opt.threads = ctx.threads;
  const Potential potential = c.build_potential();
  const std::vector<BetaEstimate> est =
      beta_sweep(b.t, b.horizons, grid, region, potential, b.trials, opt);
  std::vector<BetaSample> samples;
  for (const BetaEstimate& e : est) samples.push_back({e.t, e.T, e.value});
  const BetaBoundFit fit = beta_bound_fit(samples);

  Csv csv(ctx.file("observability.csv"), {"t", "T", "beta", "lower_bound", "C0_fit"});
  bool decreasing = true, above = true;
  for (std::size_t i = 0; i < est.size(); ++i) {
    csv.row({num(est[i].t), num(est[i].T), num(est[i].value), num(est[i].single_mode_ratio),
             num(fit.c0)});
    if (i > 0 && !(est[i].value < est[i - 1].value)) decreasing = false;
    if (!(est[i].value >= est[i].single_mode_ratio - 1e-9)) above = false;
  }
  ctx.payload = {{"C0_fit", fit.c0},
                 {"C0_note", "fitted on this discretization; not a continuum constant"},
                 {"max_fit_residual", fit.max_residual},
                 {"bound_holds", fit.holds},
                 {"decreasing", decreasing}};
  ctx.check("beta decreases in T", decreasing);
  ctx.check("beta >= single-mode ratio", above);
  ctx.check("fitted bound holds on every sample", fit.holds);

  if (b.comparison_shift) {
    const Potential other = shifted_potential(c, *b.comparison_shift);
    const std::vector<BetaEstimate> est2 =
        beta_sweep(b.t, b.horizons, grid, region, other, b.trials, opt, &est);
    std::vector<BetaSample> s2;
    for (const BetaEstimate& e : est2) s2.push_back({e.t, e.T, e.value});
    const BetaBoundFit fit2 = beta_bound_fit(s2);
    Csv cmp(ctx.file("observability_comparison.csv"), {"t", "T", "beta", "lower_bound", "C0_fit"});
    for (const BetaEstimate& e : est2)
      cmp.row({num(e.t), num(e.T), num(e.value), num(e.single_mode_ratio), num(fit2.c0)});
    const double horizon = b.horizons.back();
    ctx.payload["comparison"] = {{"shift", *b.comparison_shift},
                                 {"sup_norm", other.sup_norm(horizon)},
                                 {"base_sup_norm", potential.sup_norm(horizon)},
                                 {"C0_fit", fit2.c0},
                                 {"bound_holds", fit2.holds}};
    ctx.check("comparison bound holds", fit2.holds);
    // A negative constant shift multiplies every ratio by at least 1 (gauge factor),
    // so the fitted constant cannot decrease.
    if (*b.comparison_shift <= 0.0) ctx.check("C0 does not decrease", fit2.c0 >= fit.c0);
  }
}

// ------------------------------------------------------------------ selftest

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

double discrete_mode_norm(const SpatialGrid& grid, double T, std::size_t m) {
  const double s = std::sin(std::numbers::pi * grid.h() / (2.0 * grid.length()));
  const double lambda = 4.0 / (grid.h() * grid.h()) * s * s;
  const double dt = T / static_cast<double>(m);
  const double rho = (1.0 - 0.5 * dt * lambda) / (1.0 + 0.5 * dt * lambda);
  double gram = 0.0;
  for (std::size_t j = 0; j <= m; ++j)
    gram += ((j == 0 || j == m) ? 0.5 * dt : dt) * std::pow(rho, 2.0 * static_cast<double>(m - j));
  return std::pow(rho, static_cast<double>(m)) / std::sqrt(gram);
}

void cmd_selftest(Context& ctx) {
  const ExperimentConfig& c = ctx.config;
  std::vector<Check> checks;
  auto add = [&](const std::string& name, double value, double threshold, bool passed) {
    checks.push_back({name, value, threshold, passed});
    ctx.check(name, passed);
  };
  auto at_most = [&](const std::string& name, double value, double threshold) {
    add(name, value, threshold, value <= threshold);
  };
  std::mt19937_64 rng(c.seed);

  // Discretization invariants on the configured grid.
  const SpatialGrid grid = c.grid();
  const ControlRegion region = c.region();
  const TimeMesh mesh(c.horizon, c.steps);
  const HeatSystem sys(grid, region, c.build_potential(), mesh);
  {
    double worst = 0.0;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
      ControlSignal v(grid, mesh);
      for (double& x : v.raw()) x = normal(rng);
      v.restrict_to(region);
      worst = std::max(worst, duality_residual(sys, v, random_direction(grid, rng)).relative);
    }
    at_most("duality residual", worst, 1e-12);
  }
  {
    const Potential sep = Potential::separable(
        grid, [](double x) { return 2.0 * std::sin(2.0 * std::numbers::pi * x); },
        TimeProfile::function([](double t) { return std::cos(t); }));
    at_most("gauge equivalence", gauge_residual(HeatSystem(grid, region, sep, mesh),
                                                random_direction(grid, rng)),
            1e-6);
  }
  {
    const HeatModel whole{grid, ControlRegion::whole(grid), Potential::zero(grid), c.steps};
    const GridFunction mode = GridFunction::sample(grid, [&](double x) {
      return std::sqrt(2.0 / grid.length()) * std::sin(std::numbers::pi * x / grid.length());
    });
    SolverConfig cfg = c.solver;
    const NormValue v = norm_value(whole, c.horizon, mode, 2.0, cfg);
    const double exact = discrete_mode_norm(grid, c.horizon, c.steps);
    at_most("single-mode closed form", std::abs(v.value - exact) / exact, 1e-9);
  }

  // Optimizer-level checks on a grid of at most 20 nodes, where the dual problems
  // are well conditioned enough for the tolerances below.
  ExperimentConfig small = c;
  if (small.nodes > 20) {
    small.nodes = 20;
    small.steps = 40;
    if (!small.potential.a1.samples.empty() || small.potential.kind == "general")
      small.potential = PotentialSpec{};
  }
  // Long horizons keep the step of the shortest one, so rough data stay resolved.
  small.max_time_step = 0.05 / static_cast<double>(small.steps);
  const HeatModel model = small.model();
  HeatModel fixed = model;
  fixed.max_time_step = 0.0;
  const auto sys_small = fixed.on_horizon(0.5);
  const GridFunction y0 = random_direction(small.grid(), rng);
  SolverConfig cfg = c.solver;
  {
    const DualProblem problem = DualProblem::null_control(sys_small, y0, 2.0);
    const MinimizerResult r = minimize_J(problem, cfg);
    const GramianSolution dense = gramian_oracle(problem, cfg);
    at_most("CG vs dense Gramian", (r.z_hat - dense.z).norm() / dense.z.norm(), 1e-10);
  }
  for (double q : {1.5, 2.0, 3.0}) {
    const NormValue v = norm_value(fixed, 0.5, y0, conjugate_exponent(q), cfg);
    at_most("value/norm identity q=" + num(q), v.diagnostics.primal_dual_gap, 10.0 * cfg.tolerance);
    ctx.converged = ctx.converged && v.diagnostics.converged;

    const DualProblem problem = DualProblem::null_control(sys_small, y0, q);
    const GridFunction z = random_direction(small.grid(), rng);
    const GridFunction d = random_direction(small.grid(), rng);
    const GridFunction g = grad_J(problem, z, cfg);
    const double eps = 1e-5;
    const double fd =
        (evaluate_J(problem, z + eps * d, cfg) - evaluate_J(problem, z - eps * d, cfg)) / (2 * eps);
    const double an = g.inner(d);
    at_most("directional gradient q=" + num(q), std::abs(fd - an) / std::abs(an), 1e-5);
  }
  {
    const NormCurve curve = norm_curve(model, y0, 2.0, {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}, cfg,
                                       ctx.threads);
    add("norm curve strictly decreasing", curve.monotone ? 1.0 : 0.0, 1.0,
        curve.monotone && !curve.partial);
  }
  for (double q : {1.5, 2.0, 3.0}) {
    const RoundTrip r = roundtrip(XiElement(sys_small, random_direction(small.grid(), rng), q), cfg);
    at_most("H_q norm identity q=" + num(q), r.norm_identity_gap, 1e-12);
    at_most("H_q recovered xi q=" + num(q), r.recovered_error, 1e-3);
    at_most("H_q attainable norm q=" + num(q), r.attainable_gap, 1e-3);
  }
  {
    const std::vector<double> fractions{0.2, 0.1, 0.05, 0.025};
    const auto sys_shift = std::make_shared<const HeatSystem>(
        small.grid(), small.region(), small.build_potential().is_separable()
                                          ? small.build_potential()
                                          : Potential::zero(small.grid()),
        TimeMesh(0.5, 80));
    const ShiftDensity r =
        shift_density_check(XiElement(sys_shift, random_direction(small.grid(), rng), 2.0),
                            fractions);
    add("shift density decreasing", r.residuals.front(), 0.0, r.decreasing);
  }
  {
    BetaOptions opt;
    opt.time_step = 1e-3;
    opt.max_iterations = 100;
    opt.seed = c.seed;
    opt.threads = ctx.threads;
    const SpatialGrid g = small.grid();
    const BetaEstimate e =
        beta_estimate(0.0, 0.25, g, ControlRegion::whole(g), Potential::zero(g), 2, opt);
    add("beta >= single-mode ratio", e.value, e.single_mode_ratio,
        e.value >= e.single_mode_ratio - 1e-9);
    const std::vector<BetaEstimate> sweep =
        beta_sweep(0.0, {0.1, 0.2, 0.4, 0.8}, g, small.region(), Potential::zero(g), 2, opt);
    bool decreasing = true;
    for (std::size_t i = 1; i < sweep.size(); ++i)
      decreasing = decreasing && sweep[i].value < sweep[i - 1].value;
    add("beta decreasing in T", decreasing ? 1.0 : 0.0, 1.0, decreasing);
  }

  Csv csv(ctx.file("selftest.csv"), {"check", "value", "threshold", "passed"});
  json list = json::array();
  for (const Check& k : checks) {
    csv.row({k.name, num(k.value), num(k.threshold), flag(k.passed)});
    list.push_back({{"check", k.name}, {"value", jnum(k.value)}, {"passed", k.passed}});
  }
  ctx.payload = {{"checks", list},
                 {"optimizer_grid_nodes", small.nodes},
                 {"discretization_grid_nodes", c.nodes}};
  for (const Check& k : checks)
    std::cout << (k.passed ? "PASS " : "FAIL ") << k.name << "  value=" << num(k.value)
              << "  threshold=" << num(k.threshold) << '\n';
}

using Command = std::function<void(Context&)>;

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"forward", cmd_forward},
      {"min-norm", cmd_min_norm},
      {"norm-curve", cmd_norm_curve},
      {"time-optimal", cmd_time_optimal},
      {"bangbang", cmd_bangbang},
      {"attainable-roundtrip", cmd_attainable},
      {"shift-density", cmd_shift_density},
      {"observability", cmd_observability},
      {"selftest", cmd_selftest},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "forward",       "min-norm",      "norm-curve",    "time-optimal", "bangbang",
      "attainable-roundtrip", "shift-density", "observability", "selftest"};
  return names;
}

int run_command(const std::string& command, ExperimentConfig config, const RunOptions& options) {
  const auto it = commands().find(command);
  if (it == commands().end()) {
    std::cerr << "unknown command '" << command << "'\n";
    return kConfigError;
  }
  if (options.seed) config.seed = *options.seed;
  const fs::path dir = options.out_dir.empty() ? fs::path(config.output) : fs::path(options.out_dir);

  const auto start = std::chrono::steady_clock::now();
  Context ctx{config, dir, std::max<std::size_t>(options.threads, 1), json::object(), true, {}, {}};
  int status = kOk;
  json error = nullptr;
  try {
    validate(config);
    fs::create_directories(dir);
    it->second(ctx);
    status = (ctx.converged && ctx.failures.empty()) ? kOk : kNotConverged;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  } catch (const ConfigurationError& e) {
    error = {{"kind", "ConfigurationError"}, {"message", e.what()}};
    status = kConfigError;
  } catch (const DomainError& e) {
    error = {{"kind", "DomainError"}, {"message", e.what()}};
    status = kConfigError;
  } catch (const UnsupportedError& e) {
    error = {{"kind", "UnsupportedError"}, {"message", e.what()}};
    status = kConfigError;
  } catch (const NoOptimalControl& e) {
    error = {{"kind", "NoOptimalControl"}, {"message", e.what()}};
    status = kNotConverged;
  } catch (const BracketError& e) {
    error = {{"kind", "BracketError"}, {"message", e.what()}};
    status = kNotConverged;
  } catch (const std::exception& e) {
    error = {{"kind", "InternalError"}, {"message", e.what()}};
    status = kInternalError;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!error.is_null()) std::cerr << error["kind"].get<std::string>() << ": "
                                  << error["message"].get<std::string>() << '\n';
  if (status == kOk || status == kNotConverged || fs::exists(dir)) {
    const std::string hashed = config.canonical + "\nseed=" + std::to_string(config.seed);
    json record = {{"command", command},
                   {"config_file", config.path},
                   {"config_hash", hex64(fnv1a(hashed))},
                   {"seed", config.seed},
                   {"threads", ctx.threads},
                   {"status", status},
                   {"converged", ctx.converged},
                   {"invariants_passed", ctx.failures.empty()},
                   {"failed_invariants", ctx.failures},
                   {"wall_time_s", wall},
                   {"artifacts", ctx.artifacts},
                   {"payload", ctx.payload},
                   {"error", error}};
    fs::create_directories(dir);
    std::ofstream out(dir / "record.json");
    out << record.dump(2) << '\n';
  }
  for (const std::string& f : ctx.failures) std::cerr << "invariant failed: " << f << '\n';
  if (!ctx.converged) std::cerr << "solver did not converge for every evaluation\n";
  return status;
}

}  // namespace heatctl::cli
