#include "heatctl/attainable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "heatctl/errors.hpp"

namespace heatctl {

namespace {

// ||a - b|| / ||b|| in L^r(0,T;L2(region)); the absolute distance when b = 0.
double relative_distance(const SpaceTimeField& a, const SpaceTimeField& b,
                         const ControlRegion& region, double r) {
  SpaceTimeField diff = a;
  for (std::size_t k = 0; k < diff.raw().size(); ++k) diff.raw()[k] -= b.raw()[k];
  const double ref = bochner_norm(b, region, r);
  const double d = bochner_norm(diff, region, r);
  return ref > 0.0 ? d / ref : d;
}

ControlRegion whole_region(const SpaceTimeField& f) {
  return ControlRegion::whole(SpatialGrid(f.h() * static_cast<double>(f.nodes() + 1), f.nodes()));
}

}  // namespace

XiElement::XiElement(std::shared_ptr<const HeatSystem> system, GridFunction z, double q)
    : system_(std::move(system)), z_(std::move(z)), q_(q) {
  if (!system_) throw ConfigurationError("xi needs a heat system");
  if (!(q_ >= 1.0)) throw DomainError("dual exponent q must be at least 1");
  if (z_.size() != system_->grid().size())
    throw ConfigurationError("terminal data has the wrong size");
  adjoint_ = system_->adjoint(z_);
  restricted_ = ControlSignal(adjoint_);
  restricted_.restrict_to(system_->region());
  const std::vector<double> s = restricted_.restricted_profile(system_->region());
  norm_ = bochner_norm(s, system_->mesh(), q_);
  min_profile_ = *std::min_element(s.begin(), s.end() - 1);
}

XiElement XiElement::scaled(double c) const { return XiElement(system_, c * z_, q_); }

ControlSignal u_xi(const XiElement& xi) {
  const double q = xi.q();
  if (q == 1.0 || std::isinf(q))
    throw UnsupportedError("u_xi is defined for 1 < q < inf only, got q = " + std::to_string(q));
  if (xi.is_zero()) return xi.system().zero_control();
  return control_formula(xi.restricted(), xi.system().region(), q, 0.0);
}

AttainableElement h_q_map(const XiElement& xi) {
  AttainableElement out;
  out.control = u_xi(xi);
  const HeatSystem& sys = xi.system();
  out.y_T = sys.forward_final(sys.zero_state(), &out.control);
  out.norm = bochner_norm(out.control, conjugate_exponent(xi.q()));
  return out;
}

AttainableNorm attainable_norm(std::shared_ptr<const HeatSystem> system, const GridFunction& y_T,
                               double p, const SolverConfig& config) {
  if (!(p > 1.0)) throw DomainError("control exponent p must satisfy 1 < p <= inf");
  if (!system) throw ConfigurationError("attainable norm needs a heat system");
  const HeatSystem& sys = *system;
  AttainableNorm out;
  out.minimizer = minimize_J(DualProblem::reach_target(system, y_T, conjugate_exponent(p)), config);
  out.converged = out.minimizer.converged;
  if (y_T.is_zero()) {
    out.control = sys.zero_control();
    return out;
  }
  out.control = control_from_minimizer(out.minimizer);
  out.value = bochner_norm(out.control, p);
  out.reach_residual = (sys.forward_final(sys.zero_state(), &out.control) - y_T).norm() / y_T.norm();
  return out;
}

RoundTrip roundtrip(const XiElement& xi, const SolverConfig& config) {
  if (xi.is_zero()) throw DomainError("round trip needs a nonzero xi");
  const double q = xi.q();
  const double p = conjugate_exponent(q);
  RoundTrip out;
  out.q = q;
  out.xi_norm = xi.norm();
  const AttainableElement image = h_q_map(xi);
  out.control_norm = image.norm;
  out.norm_identity_gap = std::abs(out.control_norm - out.xi_norm) / out.xi_norm;

  const AttainableNorm recovered = attainable_norm(xi.system_ptr(), image.y_T, p, config);
  out.converged = recovered.converged;
  const XiElement xi_hat(xi.system_ptr(), recovered.minimizer.z_hat, q);
  out.recovered_error =
      relative_distance(xi_hat.restricted(), xi.restricted(), xi.system().region(), q);
  out.attainable_gap = std::abs(recovered.value - out.xi_norm) / out.xi_norm;
  return out;
}

Trajectory gauge_transform(const Trajectory& trajectory, const TimeProfile& a2, bool inverse) {
  const TimeMesh& mesh = trajectory.mesh();
  if (mesh.horizon() > a2.defined_until() * (1.0 + 1e-12))
    throw ConfigurationError("a2 is defined up to t = " + std::to_string(a2.defined_until()) +
                             " but the trajectory reaches t = " + std::to_string(mesh.horizon()));
  if (a2.is_zero()) return trajectory;
  const std::vector<double> tail = a2.tail_integrals(mesh);
  Trajectory out = trajectory;
  for (std::size_t j = 0; j < out.time_nodes(); ++j) {
    const double factor = std::exp(inverse ? -tail[j] : tail[j]);
    for (double& v : out.state(j)) v *= factor;
  }
  return out;
}

double gauge_residual(const HeatSystem& system, const GridFunction& z) {
  if (!system.potential().is_separable())
    throw UnsupportedError("the gauge transform needs a separable potential");
  const Trajectory full = system.adjoint(z);
  const HeatSystem frame = system.with_potential(system.potential().spatial_part());
  const Trajectory reference = frame.adjoint(z);
  return relative_distance(gauge_transform(full, system.potential().a2()), reference,
                           whole_region(reference), 2.0);
}

ShiftDensity shift_density_check(const XiElement& xi, std::span<const double> fractions) {
  const HeatSystem& sys = xi.system();
  if (!sys.potential().is_separable())
    throw UnsupportedError(
        "shift density needs a separable potential a1(x) + a2(t): the time shift uses the "
        "time invariance of the gauged equation");
  const std::size_t m = sys.mesh().steps();
  std::vector<std::size_t> shifts;
  for (double f : fractions) {
    if (!(f >= 0.0 && f < 1.0)) throw ConfigurationError("shrink fractions must lie in [0, 1)");
    const double steps = f * static_cast<double>(m);
    const double whole = std::round(steps);
    if (std::abs(steps - whole) > 1e-9 * std::max(1.0, steps))
      throw ConfigurationError("shrink fraction " + std::to_string(f) +
                               " is not a whole number of the " + std::to_string(m) +
                               " time steps");
    shifts.push_back(static_cast<std::size_t>(whole));
  }

  const HeatSystem frame = sys.with_potential(sys.potential().spatial_part());
  const Trajectory psi_hat = gauge_transform(xi.adjoint(), sys.potential().a2());
  ShiftDensity out;
  out.fractions.assign(fractions.begin(), fractions.end());
  for (std::size_t k : shifts) {
    const Trajectory psi_k = frame.adjoint(psi_hat.at(m - k));
    SpaceTimeField diff = psi_k;
    for (std::size_t i = 0; i < diff.raw().size(); ++i) diff.raw()[i] -= psi_hat.raw()[i];
    out.residuals.push_back(bochner_norm(diff, sys.region(), xi.q()));
  }

  std::vector<std::size_t> order(out.fractions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return out.fractions[a] > out.fractions[b]; });
  out.decreasing = true;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (!(out.residuals[order[i]] < out.residuals[order[i - 1]])) out.decreasing = false;
  return out;
}

}  // namespace heatctl
