#include "heatctl/time_optimal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "heatctl/errors.hpp"

namespace heatctl {

namespace {

// Fraction of the horizon over which the profile tests run; the tail is excluded
// because smoothing and the vanishing adjoint at t = T distort it.
constexpr double kWindow = 0.95;

}  // namespace

BangBangReport bangbang_check(const ControlSignal& control, double p, double bound) {
  if (!(p > 1.0)) throw DomainError("control exponent p must satisfy 1 < p <= inf");
  if (!(bound > 0.0)) throw DomainError("norm bound M must be positive");
  BangBangReport r;
  r.p = p;
  const TimeMesh& mesh = control.mesh();
  const std::vector<double> profile = control.profile();
  const double cutoff = kWindow * mesh.horizon() * (1.0 + 1e-12);
  r.min_profile = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  for (std::size_t j = 0; j < profile.size() && mesh.t(j) <= cutoff; ++j) {
    r.min_profile = std::min(r.min_profile, profile[j]);
    r.mean_profile += profile[j];
    r.flatness_residual = std::max(r.flatness_residual, std::abs(profile[j] - bound) / bound);
    ++count;
  }
  r.mean_profile /= static_cast<double>(count);
  if (std::isinf(p)) {
    r.saturation_residual = r.flatness_residual;
    r.verdict = r.flatness_residual <= 5e-2;
  } else {
    r.saturation_residual = std::abs(bochner_norm(control, p) - bound) / bound;
    r.verdict = r.saturation_residual <= 1e-3 && r.min_profile > 0.0 &&
                r.min_profile >= 1e-6 * r.mean_profile;
  }
  return r;
}

double TimeOptimalResult::control_norm_at(double t) const {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  if (t > t_star) return 0.0;
  const ControlSignal& u = control();
  const std::vector<double> profile = u.profile();
  const double s = t / u.mesh().dt();
  const auto j = std::min(static_cast<std::size_t>(s), u.mesh().steps() - 1);
  const double frac = std::min(s - static_cast<double>(j), 1.0);
  return (1.0 - frac) * profile[j] + frac * profile[j + 1];
}

TimeOptimalResult time_optimal_solve(const HeatModel& model, const TimeOptimalQuery& query,
                                     const SolverConfig& config) {
  const double M = query.bound;
  if (!(M > 0.0)) throw DomainError("norm bound M must be positive");
  if (!(query.p > 1.0)) throw DomainError("control exponent p must satisfy 1 < p <= inf");
  if (!(query.tolerance > 0.0)) throw ConfigurationError("bisection tolerance must be positive");
  if (!(query.t_hi > 0.0)) throw ConfigurationError("upper bracket end must be positive");
  if (query.y0.is_zero()) throw DomainError("the zero state needs no control");
  double lo = query.t_lo.value_or(query.t_hi / 64.0);
  double hi = query.t_hi;
  if (!(lo > 0.0 && lo < hi)) throw ConfigurationError("bracket must satisfy 0 < T_lo < T_hi");
  if (query.nhat && M <= *query.nhat)
    throw NoOptimalControl("no time-optimal control: M = " + std::to_string(M) +
                               " does not exceed the long-horizon limit " +
                               std::to_string(*query.nhat) +
                               " (optimal controls exist only for M above that limit)",
                           M, *query.nhat);

  bool all_converged = true;
  auto evaluate = [&](double T) {
    NormValue v = norm_value(model, T, query.y0, query.p, config);
    all_converged = all_converged && v.diagnostics.converged;
    return v;
  };

  NormValue at_hi = evaluate(hi);
  NormValue at_lo = evaluate(lo);
  if (at_hi.value >= M)
    throw BracketError("bound M = " + std::to_string(M) + " is not above N_p(T_hi) = " +
                           std::to_string(at_hi.value) + "; increase T_hi",
                       at_lo.value, at_hi.value);
  for (std::size_t k = 0; at_lo.value <= M && k < query.max_shrinks; ++k) {
    hi = lo;
    at_hi = std::move(at_lo);
    lo *= 0.5;
    at_lo = evaluate(lo);
  }
  if (at_lo.value <= M)
    throw BracketError("bound M = " + std::to_string(M) + " is not below N_p(T_lo) = " +
                           std::to_string(at_lo.value) + "; decrease T_lo",
                       at_lo.value, at_hi.value);

  TimeOptimalResult res;
  // Invariant: N(lo) > M > N(hi). Bisect in log T, since the bracket may span decades.
  NormValue best = std::abs(at_lo.value - M) < std::abs(at_hi.value - M) ? at_lo : at_hi;
  bool met = std::abs(best.value - M) <= query.tolerance * M;
  while (!met && res.bisections < query.max_bisections) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;  // bracket at floating-point resolution
    NormValue v = evaluate(mid);
    ++res.bisections;
    if (v.value > M)
      lo = mid;
    else
      hi = mid;
    if (std::abs(v.value - M) < std::abs(best.value - M)) best = v;
    met = std::abs(v.value - M) <= query.tolerance * M;
  }

  res.t_star = best.horizon;
  res.bracket_lo = lo;
  res.bracket_hi = hi;
  res.at_star = std::move(best);
  res.achieved_norm = res.at_star.diagnostics.primal_norm;
  res.null_residual = res.at_star.diagnostics.null_residual;
  res.report = bangbang_check(res.at_star.control, query.p, M);
  res.converged = met && all_converged;
  return res;
}

}  // namespace heatctl
