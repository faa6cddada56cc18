#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "heatctl/errors.hpp"

namespace heatctl::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Positions of parsed keys, so that validation errors can point at the file.
class Locator {
 public:
  explicit Locator(std::string file) : file_(std::move(file)) {}

  void record(const std::string& key, const YAML::Mark& mark) { marks_[key] = mark; }

  std::string at(const YAML::Mark& mark) const {
    if (mark.is_null()) return file_ + ": ";
    return file_ + ":" + std::to_string(mark.line + 1) + ":" + std::to_string(mark.column + 1) +
           ": ";
  }
  std::string at(const std::string& key) const {
    const auto it = marks_.find(key);
    return it == marks_.end() ? file_ + ": " : at(it->second);
  }
  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ConfigError(at(key) + key + ": " + message);
  }
  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    throw ConfigError(at(node.Mark()) + message);
  }
  const std::string& file() const { return file_; }

 private:
  std::string file_;
  std::map<std::string, YAML::Mark> marks_;
};

class Parser {
 public:
  Parser(Locator& loc, std::filesystem::path base) : loc_(loc), base_(std::move(base)) {}

  void parse(const YAML::Node& root, ExperimentConfig& c) {
    if (!root.IsMap()) loc_.fail(root, "the configuration must be a mapping of sections");
    const std::set<std::string> known{"grid",        "mesh",          "region",     "potential",
                                      "initial_state", "exponents",   "solver",     "norm_curve",
                                      "time_optimal", "bangbang",     "attainable", "shift_density",
                                      "observability", "seed",        "output"};
    check_keys(root, "", known);
    if (auto g = section(root, "grid")) {
      check_keys(g, "grid", {"length", "nodes"});
      real(g, "grid", "length", c.length);
      count(g, "grid", "nodes", c.nodes);
    }
    if (auto m = section(root, "mesh")) {
      check_keys(m, "mesh", {"horizon", "steps", "max_time_step"});
      real(m, "mesh", "horizon", c.horizon);
      count(m, "mesh", "steps", c.steps);
      real(m, "mesh", "max_time_step", c.max_time_step);
    }
    if (auto r = section(root, "region")) {
      check_keys(r, "region", {"alpha", "beta"});
      real(r, "region", "alpha", c.alpha);
      real(r, "region", "beta", c.beta);
    }
    if (auto p = section(root, "potential")) parse_potential(p, c.potential);
    if (auto y = root["initial_state"]) parse_initial(y, c.initial_state);
    if (auto e = section(root, "exponents")) {
      check_keys(e, "exponents", {"p", "q"});
      if (e["p"] && e["q"]) loc_.fail(e, "give either p or q, not both");
      if (e["p"]) real(e, "exponents", "p", c.p);
      if (e["q"]) {
        double q = 2.0;
        real(e, "exponents", "q", q);
        if (!(q >= 1.0) || std::isinf(q)) loc_.fail("exponents.q", "q must satisfy 1 <= q < inf");
        c.p = conjugate_exponent(q);
      }
    }
    if (auto s = section(root, "solver")) parse_solver(s, c.solver);
    if (auto n = section(root, "norm_curve")) {
      check_keys(n, "norm_curve", {"horizons"});
      reals(n, "norm_curve", "horizons", c.curve_horizons);
    }
    if (auto t = section(root, "time_optimal")) {
      check_keys(t, "time_optimal",
                 {"bounds", "t_hi", "t_lo", "tolerance", "nhat", "nhat_horizons"});
      TimeOptimalBlock& b = c.time_optimal;
      reals(t, "time_optimal", "bounds", b.bounds);
      real(t, "time_optimal", "t_hi", b.t_hi);
      optional_real(t, "time_optimal", "t_lo", b.t_lo);
      real(t, "time_optimal", "tolerance", b.tolerance);
      optional_real(t, "time_optimal", "nhat", b.nhat);
      reals(t, "time_optimal", "nhat_horizons", b.nhat_horizons);
    }
    if (auto b = section(root, "bangbang")) {
      check_keys(b, "bangbang", {"horizon", "exponents"});
      real(b, "bangbang", "horizon", c.bangbang.horizon);
      reals(b, "bangbang", "exponents", c.bangbang.exponents);
    }
    if (auto a = section(root, "attainable")) {
      check_keys(a, "attainable", {"exponents", "samples"});
      reals(a, "attainable", "exponents", c.attainable.exponents);
      count(a, "attainable", "samples", c.attainable.samples);
    }
    if (auto s = section(root, "shift_density")) {
      check_keys(s, "shift_density", {"fractions", "q"});
      reals(s, "shift_density", "fractions", c.shift.fractions);
      real(s, "shift_density", "q", c.shift.q);
    }
    if (auto o = section(root, "observability")) {
      check_keys(o, "observability",
                 {"t", "horizons", "trials", "time_step", "max_iterations", "comparison_shift"});
      ObservabilityBlock& b = c.observability;
      real(o, "observability", "t", b.t);
      reals(o, "observability", "horizons", b.horizons);
      count(o, "observability", "trials", b.trials);
      real(o, "observability", "time_step", b.time_step);
      count(o, "observability", "max_iterations", b.max_iterations);
      optional_real(o, "observability", "comparison_shift", b.comparison_shift);
    }
    if (auto s = root["seed"]) {
      std::size_t seed = 0;
      count(root, "", "seed", seed);
      c.seed = seed;
    }
    if (auto o = root["output"]) {
      loc_.record("output", o.Mark());
      if (!o.IsScalar()) loc_.fail(o, "output must be a path");
      c.output = o.as<std::string>();
    }
  }

 private:
  static std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
  }

  YAML::Node section(const YAML::Node& root, const std::string& key) {
    YAML::Node n = root[key];
    if (!n) return n;
    loc_.record(key, n.Mark());
    if (!n.IsMap()) loc_.fail(n, "section '" + key + "' must be a mapping");
    return n;
  }

  void check_keys(const YAML::Node& node, const std::string& prefix,
                  const std::set<std::string>& allowed) {
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        loc_.fail(kv.first, "unknown key '" + join(prefix, key) + "' (expected one of: " +
                                list + ")");
      }
      loc_.record(join(prefix, key), kv.second.Mark());
    }
  }

  double to_real(const YAML::Node& n, const std::string& what) {
    if (!n.IsScalar()) loc_.fail(n, what + " must be a number");
    const std::string text = n.as<std::string>();
    std::string lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "inf" || lower == ".inf" || lower == "infinity" || lower == "+inf") return kInf;
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      loc_.fail(n, what + " must be a number, got '" + text + "'");
    }
  }

  void real(const YAML::Node& node, const std::string& prefix, const std::string& key,
            double& out) {
    if (const YAML::Node n = node[key]) out = to_real(n, join(prefix, key));
  }

  void optional_real(const YAML::Node& node, const std::string& prefix, const std::string& key,
                     std::optional<double>& out) {
    if (const YAML::Node n = node[key]) out = to_real(n, join(prefix, key));
  }

  void count(const YAML::Node& node, const std::string& prefix, const std::string& key,
             std::size_t& out) {
    const YAML::Node n = node[key];
    if (!n) return;
    const std::string what = join(prefix, key);
    const double v = to_real(n, what);
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e15)
      loc_.fail(n, what + " must be a nonnegative integer");
    out = static_cast<std::size_t>(v);
  }

  std::vector<double> real_list(const YAML::Node& n, const std::string& what) {
    if (!n.IsSequence()) loc_.fail(n, what + " must be a list of numbers");
    std::vector<double> out;
    for (const auto& item : n) out.push_back(to_real(item, what));
    return out;
  }

  void reals(const YAML::Node& node, const std::string& prefix, const std::string& key,
             std::vector<double>& out) {
    if (const YAML::Node n = node[key]) out = real_list(n, join(prefix, key));
  }

  void parse_solver(const YAML::Node& s, SolverConfig& cfg) {
    check_keys(s, "solver",
               {"smoothing", "ridge", "tolerance", "max_iterations", "starts", "memory",
                "continuation_decades"});
    optional_real(s, "solver", "smoothing", cfg.smoothing);
    real(s, "solver", "ridge", cfg.ridge);
    real(s, "solver", "tolerance", cfg.tolerance);
    count(s, "solver", "max_iterations", cfg.max_iterations);
    count(s, "solver", "starts", cfg.starts);
    count(s, "solver", "memory", cfg.memory);
    count(s, "solver", "continuation_decades", cfg.continuation_decades);
  }

  void parse_potential(const YAML::Node& p, PotentialSpec& spec) {
    check_keys(p, "potential", {"kind", "a1", "a2", "table", "spacing"});
    if (const YAML::Node k = p["kind"]) spec.kind = k.as<std::string>();
    if (spec.kind != "zero" && spec.kind != "separable" && spec.kind != "general")
      loc_.fail("potential.kind", "must be one of zero, separable, general");
    if (spec.kind != "separable" && (p["a1"] || p["a2"]))
      loc_.fail("potential", "a1/a2 are only allowed for kind: separable");
    if (spec.kind != "general" && (p["table"] || p["spacing"]))
      loc_.fail("potential", "table/spacing are only allowed for kind: general");
    if (const YAML::Node a1 = p["a1"]) {
      if (a1.IsSequence()) {
        spec.a1.samples = real_list(a1, "potential.a1");
      } else if (a1.IsMap()) {
        check_keys(a1, "potential.a1", {"amplitude", "wavenumber"});
        real(a1, "potential.a1", "amplitude", spec.a1.amplitude);
        real(a1, "potential.a1", "wavenumber", spec.a1.wavenumber);
      } else {
        loc_.fail(a1, "potential.a1 must be a list of nodal values or {amplitude, wavenumber}");
      }
    }
    if (const YAML::Node a2 = p["a2"]) {
      if (a2.IsScalar()) {
        spec.a2.offset = to_real(a2, "potential.a2");
      } else if (a2.IsMap() && a2["values"]) {
        check_keys(a2, "potential.a2", {"spacing", "values"});
        real(a2, "potential.a2", "spacing", spec.a2.spacing);
        reals(a2, "potential.a2", "values", spec.a2.samples);
      } else if (a2.IsMap()) {
        check_keys(a2, "potential.a2", {"offset", "amplitude", "frequency"});
        real(a2, "potential.a2", "offset", spec.a2.offset);
        real(a2, "potential.a2", "amplitude", spec.a2.amplitude);
        real(a2, "potential.a2", "frequency", spec.a2.frequency);
      } else {
        loc_.fail(a2, "potential.a2 must be a number, {offset, amplitude, frequency} or "
                      "{spacing, values}");
      }
    }
    if (spec.kind == "general") {
      if (!p["table"]) loc_.fail("potential", "kind: general needs a table path");
      spec.table = p["table"].as<std::string>();
      real(p, "potential", "spacing", spec.table_spacing);
      load_table(p["table"], spec);
    }
  }

  void load_table(const YAML::Node& node, PotentialSpec& spec) {
    std::filesystem::path path(spec.table);
    if (path.is_relative()) path = base_ / path;
    std::ifstream in(path);
    if (!in) loc_.fail(node, "cannot open potential table '" + path.string() + "'");
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
      ++row;
      if (line.empty() || line[0] == '#') continue;
      std::vector<double> values;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) {
        try {
          values.push_back(std::stod(cell));
        } catch (const std::exception&) {
          throw ConfigError(path.string() + ":" + std::to_string(row) + ": bad number '" + cell +
                            "'");
        }
      }
      spec.rows.push_back(std::move(values));
    }
  }

  void parse_initial(const YAML::Node& y, InitialStateSpec& spec) {
    loc_.record("initial_state", y.Mark());
    if (y.IsScalar()) {
      spec.kind = y.as<std::string>();
      if (spec.kind != "mode" && spec.kind != "smooth" && spec.kind != "random")
        loc_.fail(y, "initial_state must be mode, smooth, random, a list of nodal values or "
                     "{modes: [...]}");
    } else if (y.IsSequence()) {
      spec.kind = "samples";
      spec.values = real_list(y, "initial_state");
    } else if (y.IsMap()) {
      check_keys(y, "initial_state", {"modes"});
      spec.kind = "modes";
      reals(y, "initial_state", "modes", spec.values);
    } else {
      loc_.fail(y, "initial_state is malformed");
    }
  }

  Locator& loc_;
  std::filesystem::path base_;
};

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) return false;
  return true;
}

bool multiple_of(double value, double step) {
  const double s = value / step;
  return std::abs(s - std::round(s)) <= 1e-9 * std::max(1.0, s);
}

void validate_with(const ExperimentConfig& c, const Locator& loc) {
  if (!(c.length > 0.0) || !std::isfinite(c.length)) loc.fail("grid.length", "must be positive");
  if (c.nodes < 1) loc.fail("grid.nodes", "must be at least 1");
  if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) loc.fail("mesh.horizon", "must be positive");
  if (c.steps < 1) loc.fail("mesh.steps", "must be at least 1");
  if (!(c.max_time_step >= 0.0) || !std::isfinite(c.max_time_step))
    loc.fail("mesh.max_time_step", "must be nonnegative (0: no limit)");
  if (!(c.alpha >= 0.0 && c.alpha < c.beta && c.beta <= c.length))
    loc.fail("region", "needs 0 <= alpha < beta <= L");
  try {
    (void)c.region();
  } catch (const std::exception& e) {
    loc.fail("region", e.what());
  }
  if (!(c.p > 1.0)) loc.fail("exponents", "p must satisfy 1 < p <= inf");
  try {
    c.solver.validate();
  } catch (const std::exception& e) {
    loc.fail("solver", e.what());
  }

  // Potential: shape and the horizons it must cover.
  const PotentialSpec& ps = c.potential;
  if (ps.kind == "separable") {
    if (!ps.a1.samples.empty() && ps.a1.samples.size() != c.nodes)
      loc.fail("potential.a1", "needs one value per interior node (" + std::to_string(c.nodes) +
                                   ")");
    if (!ps.a2.samples.empty() && !(ps.a2.spacing > 0.0))
      loc.fail("potential.a2", "sample spacing must be positive");
  }
  if (ps.kind == "general") {
    if (!(ps.table_spacing > 0.0)) loc.fail("potential.spacing", "must be positive");
    if (ps.rows.size() < 2) loc.fail("potential.table", "needs at least two time levels");
    for (const auto& row : ps.rows)
      if (row.size() != c.nodes)
        loc.fail("potential.table", "every row needs " + std::to_string(c.nodes) + " values");
  }
  double longest = std::max({c.horizon, c.time_optimal.t_hi, c.bangbang.horizon});
  for (double T : c.curve_horizons) longest = std::max(longest, T);
  for (double T : c.time_optimal.nhat_horizons) longest = std::max(longest, T);
  for (double T : c.observability.horizons) longest = std::max(longest, T);
  try {
    c.build_potential().check_horizon(longest);
  } catch (const std::exception& e) {
    loc.fail("potential", e.what());
  }

  // Initial state.
  const InitialStateSpec& y = c.initial_state;
  if (y.kind == "samples" && y.values.size() != c.nodes)
    loc.fail("initial_state", "needs one value per interior node (" + std::to_string(c.nodes) + ")");
  if (y.kind == "modes" && y.values.empty()) loc.fail("initial_state", "modes list is empty");
  for (double v : y.values)
    if (!std::isfinite(v)) loc.fail("initial_state", "values must be finite");
  if (c.initial().is_zero()) loc.fail("initial_state", "must be nonzero");

  // Command blocks.
  if (c.curve_horizons.empty()) loc.fail("norm_curve.horizons", "must not be empty");
  for (double T : c.curve_horizons)
    if (!(T > 0.0)) loc.fail("norm_curve.horizons", "must be positive");
  if (!strictly_increasing(c.curve_horizons))
    loc.fail("norm_curve.horizons", "must be strictly increasing");

  const TimeOptimalBlock& to = c.time_optimal;
  for (double M : to.bounds)
    if (!(M > 0.0)) loc.fail("time_optimal.bounds", "bounds M must be positive");
  if (!(to.t_hi > 0.0)) loc.fail("time_optimal.t_hi", "must be positive");
  if (to.t_lo && !(*to.t_lo > 0.0 && *to.t_lo < to.t_hi))
    loc.fail("time_optimal.t_lo", "must satisfy 0 < t_lo < t_hi");
  if (!(to.tolerance > 0.0 && to.tolerance < 1.0))
    loc.fail("time_optimal.tolerance", "must lie in (0, 1)");
  if (to.nhat && !(*to.nhat >= 0.0)) loc.fail("time_optimal.nhat", "must be nonnegative");
  if (!to.nhat_horizons.empty()) {
    if (to.nhat_horizons.size() < 5) loc.fail("time_optimal.nhat_horizons", "needs >= 5 horizons");
    if (!strictly_increasing(to.nhat_horizons) || !(to.nhat_horizons.front() > 0.0))
      loc.fail("time_optimal.nhat_horizons", "must be positive and strictly increasing");
    if (to.nhat_horizons.back() < 4.0 * to.nhat_horizons.front())
      loc.fail("time_optimal.nhat_horizons", "last horizon must be at least 4x the first");
  }

  if (!(c.bangbang.horizon > 0.0)) loc.fail("bangbang.horizon", "must be positive");
  if (c.bangbang.exponents.empty()) loc.fail("bangbang.exponents", "must not be empty");
  for (double p : c.bangbang.exponents)
    if (!(p > 1.0)) loc.fail("bangbang.exponents", "p must satisfy 1 < p <= inf");

  if (c.attainable.exponents.empty()) loc.fail("attainable.exponents", "must not be empty");
  for (double q : c.attainable.exponents)
    if (!(q > 1.0) || std::isinf(q)) loc.fail("attainable.exponents", "q must satisfy 1 < q < inf");
  if (c.attainable.samples < 1) loc.fail("attainable.samples", "must be at least 1");

  if (c.shift.fractions.empty()) loc.fail("shift_density.fractions", "must not be empty");
  const HeatModel shape{c.grid(), c.region(), Potential::zero(c.grid()), c.steps, c.max_time_step};
  const std::size_t steps_at_horizon = shape.steps_for(c.horizon);
  for (double f : c.shift.fractions) {
    if (!(f >= 0.0 && f < 1.0)) loc.fail("shift_density.fractions", "must lie in [0, 1)");
    if (!multiple_of(f * static_cast<double>(steps_at_horizon), 1.0))
      loc.fail("shift_density.fractions", "fraction " + std::to_string(f) +
                                              " times the number of time steps (" +
                                              std::to_string(steps_at_horizon) +
                                              ") must be a whole number");
  }
  if (!(c.shift.q >= 1.0)) loc.fail("shift_density.q", "must be at least 1");

  const ObservabilityBlock& ob = c.observability;
  if (!(ob.time_step > 0.0)) loc.fail("observability.time_step", "must be positive");
  if (!(ob.t >= 0.0) || !multiple_of(ob.t, ob.time_step))
    loc.fail("observability.t", "must be a nonnegative multiple of time_step");
  if (ob.horizons.size() < 4) loc.fail("observability.horizons", "needs at least 4 horizons");
  if (!strictly_increasing(ob.horizons) || !(ob.horizons.front() > ob.t))
    loc.fail("observability.horizons", "must be strictly increasing and exceed t");
  for (double T : ob.horizons)
    if (!multiple_of(T, ob.time_step))
      loc.fail("observability.horizons", "every horizon must be a multiple of time_step");
  if (ob.trials < 1) loc.fail("observability.trials", "must be at least 1");
  if (ob.max_iterations < 1) loc.fail("observability.max_iterations", "must be at least 1");
  if (ob.comparison_shift && !std::isfinite(*ob.comparison_shift))
    loc.fail("observability.comparison_shift", "must be finite");
}

}  // namespace

ControlRegion ExperimentConfig::region() const {
  const SpatialGrid g = grid();
  if (alpha == 0.0 && beta == length) return ControlRegion::whole(g);
  return ControlRegion(g, alpha, beta);
}

Potential ExperimentConfig::build_potential() const {
  const SpatialGrid g = grid();
  const PotentialSpec& ps = potential;
  if (ps.kind == "zero") return Potential::zero(g);
  if (ps.kind == "general") return Potential::general_table(g, ps.table_spacing, ps.rows);
  std::vector<double> a1 = ps.a1.samples;
  if (a1.empty()) {
    a1.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i)
      a1[i] = ps.a1.amplitude * std::sin(ps.a1.wavenumber * std::numbers::pi * g.x(i) / length);
  }
  TimeProfile a2;
  if (!ps.a2.samples.empty()) {
    a2 = TimeProfile::samples(ps.a2.spacing, ps.a2.samples);
  } else if (ps.a2.amplitude != 0.0) {
    const double c = ps.a2.offset, A = ps.a2.amplitude, w = ps.a2.frequency;
    a2 = TimeProfile::function([c, A, w](double t) { return c + A * std::cos(w * t); });
  } else if (ps.a2.offset != 0.0) {
    a2 = TimeProfile::constant(ps.a2.offset);
  }
  return Potential::separable(g, std::move(a1), std::move(a2));
}

HeatModel ExperimentConfig::model() const {
  return HeatModel{grid(), region(), build_potential(), steps, max_time_step};
}

std::shared_ptr<const HeatSystem> ExperimentConfig::system() const {
  return model().on_horizon(horizon);
}

GridFunction ExperimentConfig::initial() const {
  const SpatialGrid g = grid();
  const double pi = std::numbers::pi;
  const InitialStateSpec& y = initial_state;
  if (y.kind == "samples") return GridFunction(g, y.values);
  if (y.kind == "random") {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    GridFunction f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = normal(rng);
    return f;
  }
  std::vector<double> coefficients;
  if (y.kind == "mode") coefficients = {std::sqrt(2.0 / length)};
  if (y.kind == "smooth") coefficients = {1.0, 0.5, 0.25};
  if (y.kind == "modes") coefficients = y.values;
  return GridFunction::sample(g, [&](double x) {
    double v = 0.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k)
      v += coefficients[k] * std::sin(static_cast<double>(k + 1) * pi * x / length);
    return v;
  });
}

void validate(const ExperimentConfig& config) { validate_with(config, Locator(config.path)); }

ExperimentConfig parse_config(const std::string& text, const std::string& name) {
  Locator loc(name);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(loc.at(e.mark) + "YAML syntax error: " + e.msg);
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  ExperimentConfig c;
  c.path = name;
  const std::filesystem::path base =
      name.empty() ? std::filesystem::current_path()
                   : std::filesystem::absolute(std::filesystem::path(name)).parent_path();
  Parser(loc, base).parse(root, c);
  YAML::Emitter out;
  out << root;
  c.canonical = out.c_str();
  validate_with(c, loc);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open configuration file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << value;
  return os.str();
}

}  // namespace heatctl::cli
