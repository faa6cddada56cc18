#include "heatctl/norm_value.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "heatctl/errors.hpp"

namespace heatctl {

namespace {

void check_primal_exponent(double p) {
  if (!(p > 1.0)) throw DomainError("control exponent p must satisfy 1 < p <= inf");
}

}  // namespace

NormValue norm_value(const HeatModel& model, double horizon, const GridFunction& y0, double p,
                     const SolverConfig& config) {
  check_primal_exponent(p);
  if (!(horizon > 0.0)) throw ConfigurationError("horizon must be positive");
  const auto system = model.on_horizon(horizon);
  const double q = conjugate_exponent(p);

  NormValue out;
  out.horizon = horizon;
  out.p = p;
  out.minimizer = minimize_J(DualProblem::null_control(system, y0, q), config);
  const MinimizerResult& r = out.minimizer;
  NormDiagnostics& d = out.diagnostics;
  d.converged = r.converged;
  d.relative_gradient = r.reference_grad_norm > 0.0 ? r.grad_norm / r.reference_grad_norm : 0.0;
  d.smoothing = r.smoothing;
  d.iterations = r.iterations;
  d.message = r.message;
  if (y0.is_zero()) {
    out.control = system->zero_control();
    return out;
  }
  out.value = r.norm;
  out.control = control_from_minimizer(r);
  d.primal_norm = bochner_norm(out.control, p);
  d.primal_dual_gap = out.value > 0.0 ? std::abs(d.primal_norm - out.value) / out.value : 0.0;
  d.null_residual = system->forward_final(y0, &out.control).norm() / y0.norm();
  return out;
}

DualSupCheck dual_sup_check(const HeatSystem& system, const GridFunction& y0, double q,
                            const std::vector<GridFunction>& trials) {
  if (!(q >= 1.0)) throw DomainError("dual exponent q must be at least 1");
  const GridFunction free = system.forward_final(y0);
  DualSupCheck out;
  out.value = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < trials.size(); ++k) {
    const GridFunction& z = trials[k];
    if (z.size() != system.grid().size()) throw ConfigurationError("trial has the wrong size");
    if (z.is_zero()) throw ConfigurationError("trial directions must be nonzero");
    const double denom = bochner_norm(system.adjoint(z), system.region(), q);
    if (!(denom > 0.0)) {
      ++out.rejected;
      continue;
    }
    ++out.accepted;
    const double ratio = free.inner(z) / denom;
    if (ratio > best) {
      best = ratio;
      out.best = k;
    }
  }
  if (out.accepted > 0) out.value = best;
  return out;
}

NormCurve norm_curve(const HeatModel& model, const GridFunction& y0, double p,
                     const std::vector<double>& horizons, const SolverConfig& config,
                     std::size_t threads) {
  check_primal_exponent(p);
  if (horizons.empty()) throw ConfigurationError("norm curve needs at least one horizon");
  for (std::size_t i = 0; i < horizons.size(); ++i) {
    if (!(horizons[i] > 0.0)) throw ConfigurationError("horizons must be positive");
    if (i > 0 && !(horizons[i] > horizons[i - 1]))
      throw ConfigurationError("horizons must be strictly increasing");
  }
  NormCurve curve;
  curve.p = p;
  curve.samples.resize(horizons.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (std::size_t i = next++; i < horizons.size() && !failed; i = next++) {
      try {
        const NormValue v = norm_value(model, horizons[i], y0, p, config);
        curve.samples[i] = {horizons[i], v.value, v.diagnostics.converged,
                            v.diagnostics.primal_dual_gap};
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const std::size_t count = std::clamp<std::size_t>(threads, 1, horizons.size());
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  const NormSample* previous = nullptr;
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const NormSample& s = curve.samples[i];
    if (!s.converged) {
      curve.partial = true;
      continue;
    }
    if (previous && curve.monotone && !(s.value < previous->value * (1.0 - 1e-9))) {
      curve.monotone = false;
      curve.first_violation = static_cast<std::size_t>(previous - curve.samples.data());
    }
    previous = &s;
  }
  return curve;
}

NhatEstimate nhat_estimate(const NormCurve& curve) {
  std::vector<NormSample> good;
  for (const NormSample& s : curve.samples)
    if (s.converged) good.push_back(s);
  if (good.size() < 5)
    throw ConfigurationError("plateau estimate needs at least 5 converged samples, got " +
                             std::to_string(good.size()));
  if (good.back().horizon < 4.0 * good.front().horizon)
    throw ConfigurationError("plateau estimate needs the last horizon at least 4x the first");

  NhatEstimate out;
  out.tail_samples = 3;
  const std::size_t first = good.size() - out.tail_samples;
  for (std::size_t i = first; i + 1 < good.size(); ++i) {
    const double a = good[i].value;
    const double b = good[i + 1].value;
    const double scale = std::max(std::abs(a), std::abs(b));
    const double change = scale > 0.0 ? std::abs(a - b) / scale : 0.0;
    out.plateau_residual = std::max(out.plateau_residual, change);
  }
  out.value = std::numeric_limits<double>::infinity();
  for (const NormSample& s : good) out.value = std::min(out.value, s.value);
  out.value = std::max(out.value, 0.0);
  out.converged = out.plateau_residual <= 0.1;
  return out;
}

}  // namespace heatctl
