#include "heatctl/heat_system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heatctl/errors.hpp"
#include "heatctl/simd/kernels.hpp"

namespace heatctl {

HeatSystem::HeatSystem(SpatialGrid grid, ControlRegion region, Potential potential, TimeMesh mesh)
    : grid_(grid), region_(region), potential_(std::move(potential)), mesh_(mesh) {
  if (potential_.nodes() != grid_.size())
    throw ConfigurationError("potential was built for " + std::to_string(potential_.nodes()) +
                             " nodes, grid has " + std::to_string(grid_.size()));
  if (region_.last() > grid_.size())
    throw ConfigurationError("control region does not belong to this grid");
  potential_.check_horizon(mesh_.horizon());
  build();
}

HeatSystem HeatSystem::with_mesh(const TimeMesh& mesh) const {
  return HeatSystem(grid_, region_, potential_, mesh);
}

HeatSystem HeatSystem::with_potential(Potential potential) const {
  return HeatSystem(grid_, region_, std::move(potential), mesh_);
}

HeatSystem::Factor HeatSystem::factorize(std::span<const double> a) const {
  const std::size_t n = grid_.size();
  const double dt = mesh_.dt();
  const double h2 = grid_.h() * grid_.h();
  const double off = -coupling_;  // off-diagonal of I + dt/2 K
  Factor f;
  f.explicit_diag.resize(n);
  f.inv_pivot.resize(n);
  f.upper.resize(n);
  double prev_upper = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k_diag = 2.0 / h2 + a[i];
    f.explicit_diag[i] = 1.0 - 0.5 * dt * k_diag;
    const double pivot = 1.0 + 0.5 * dt * k_diag - off * prev_upper;
    if (!(pivot > 0.0))
      throw ConfigurationError(
          "implicit step matrix is not positive definite; reduce the time step for this "
          "potential");
    f.inv_pivot[i] = 1.0 / pivot;
    f.upper[i] = off * f.inv_pivot[i];
    prev_upper = f.upper[i];
  }
  return f;
}

void HeatSystem::build() {
  coupling_ = mesh_.dt() / (2.0 * grid_.h() * grid_.h());
  const std::size_t m = mesh_.steps();
  factors_.clear();
  gains_.assign(m, 1.0);
  if (potential_.is_separable()) {
    factors_.push_back(factorize(potential_.a1()));
    const TimeProfile& a2 = potential_.a2();
    if (!a2.is_zero())
      for (std::size_t j = 0; j < m; ++j) gains_[j] = std::exp(-mesh_.dt() * a2(mesh_.midpoint(j)));
  } else {
    factors_.reserve(m);
    for (std::size_t j = 0; j < m; ++j) factors_.push_back(factorize(potential_.sample(mesh_.midpoint(j))));
  }
}

void HeatSystem::step(std::size_t j, std::span<const double> in, std::span<double> out,
                      std::span<double> scratch) const {
  const Factor& f = factors_.size() == 1 ? factors_.front() : factors_[j];
  const std::size_t n = in.size();
  // scratch = (I - dt/2 K) in
  simd::tridiag_apply(f.explicit_diag, coupling_, in, scratch);
  // Solve (I + dt/2 K) out = g_j * scratch; off-diagonal is -coupling.
  const double off = -coupling_;
  const double g = gains_[j];
  double carry = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    carry = (g * scratch[i] - off * carry) * f.inv_pivot[i];
    out[i] = carry;
  }
  for (std::size_t i = n - 1; i-- > 0;) out[i] -= f.upper[i] * out[i + 1];
}

void HeatSystem::check_state(const GridFunction& f, const char* what) const {
  if (f.size() != grid_.size())
    throw ConfigurationError(std::string(what) + " has " + std::to_string(f.size()) +
                             " values, grid has " + std::to_string(grid_.size()) + " nodes");
}

void HeatSystem::check_control(const SpaceTimeField& u) const {
  if (u.nodes() != grid_.size())
    throw ConfigurationError("control has " + std::to_string(u.nodes()) +
                             " nodes per time, grid has " + std::to_string(grid_.size()));
  if (u.mesh().steps() != mesh_.steps() ||
      std::abs(u.mesh().horizon() - mesh_.horizon()) > 1e-14 * mesh_.horizon())
    throw ConfigurationError("control time mesh does not match the system time mesh");
}

void HeatSystem::add_source(std::span<double> state, const SpaceTimeField& control, std::size_t j,
                            double weight) const {
  const auto first = region_.first();
  const auto count = region_.count();
  simd::axpy(weight, control.state(j).subspan(first, count), state.subspan(first, count));
}

Trajectory HeatSystem::forward(const GridFunction& y0, const SpaceTimeField* control) const {
  check_state(y0, "initial state");
  if (control) check_control(*control);
  Trajectory y(grid_, mesh_);
  y.set(0, y0);
  std::vector<double> work(grid_.size()), scratch(grid_.size());
  const double half = 0.5 * mesh_.dt();
  for (std::size_t j = 0; j < mesh_.steps(); ++j) {
    std::copy(y.state(j).begin(), y.state(j).end(), work.begin());
    if (control) add_source(work, *control, j, half);
    step(j, work, y.state(j + 1), scratch);
    if (control) add_source(y.state(j + 1), *control, j + 1, half);
  }
  return y;
}

GridFunction HeatSystem::forward_from(std::size_t start, const GridFunction& init,
                                      const SpaceTimeField* control) const {
  check_state(init, "initial state");
  if (start > mesh_.steps()) throw ConfigurationError("start node beyond the time mesh");
  if (control) check_control(*control);
  std::vector<double> cur(init.values().begin(), init.values().end());
  std::vector<double> next(grid_.size()), scratch(grid_.size());
  const double half = 0.5 * mesh_.dt();
  for (std::size_t j = start; j < mesh_.steps(); ++j) {
    if (control) add_source(cur, *control, j, half);
    step(j, cur, next, scratch);
    if (control) add_source(next, *control, j + 1, half);
    cur.swap(next);
  }
  return GridFunction(grid_, std::move(cur));
}

GridFunction HeatSystem::forward_final(const GridFunction& y0,
                                       const SpaceTimeField* control) const {
  return forward_from(0, y0, control);
}

Trajectory HeatSystem::adjoint(const GridFunction& z) const {
  check_state(z, "terminal datum");
  Trajectory phi(grid_, mesh_);
  phi.set(mesh_.steps(), z);
  std::vector<double> scratch(grid_.size());
  for (std::size_t j = mesh_.steps(); j-- > 0;) step(j, phi.state(j + 1), phi.state(j), scratch);
  return phi;
}

std::size_t HeatModel::steps_for(double horizon) const {
  if (!(max_time_step > 0.0)) return steps;
  const double needed = std::ceil(horizon / max_time_step * (1.0 - 1e-12));
  return std::max(steps, static_cast<std::size_t>(needed));
}

std::shared_ptr<const HeatSystem> HeatModel::on_horizon(double horizon) const {
  return std::make_shared<const HeatSystem>(grid, region, potential,
                                            TimeMesh(horizon, steps_for(horizon)));
}

Trajectory solve_forward(const SpatialGrid& grid, const ControlRegion& region,
                         const Potential& potential, const GridFunction& y0,
                         const ControlSignal& u, const TimeMesh& mesh) {
  const HeatSystem system(grid, region, potential, mesh);
  return system.forward(y0, &u);
}

Trajectory solve_adjoint(const SpatialGrid& grid, const ControlRegion& region,
                         const Potential& potential, const GridFunction& z, const TimeMesh& mesh) {
  const HeatSystem system(grid, region, potential, mesh);
  return system.adjoint(z);
}

double space_time_inner(const SpaceTimeField& u, const SpaceTimeField& s,
                        const ControlRegion& region, std::size_t start) {
  if (u.nodes() != s.nodes() || u.time_nodes() != s.time_nodes())
    throw ConfigurationError("space-time fields have different shapes");
  const TimeMesh& mesh = u.mesh();
  double acc = 0.0;
  for (std::size_t j = start; j <= mesh.steps(); ++j)
    acc += mesh.weight(j, start) *
           simd::dot(u.state(j).subspan(region.first(), region.count()),
                     s.state(j).subspan(region.first(), region.count()));
  return u.h() * acc;
}

DualityCheck duality_residual(const HeatSystem& system, const ControlSignal& v,
                              const GridFunction& z) {
  const GridFunction yT = system.forward_final(system.zero_state(), &v);
  const Trajectory phi = system.adjoint(z);
  DualityCheck out;
  out.state_pairing = yT.inner(z);
  out.adjoint_pairing = space_time_inner(v, phi, system.region());
  out.residual = std::abs(out.state_pairing - out.adjoint_pairing);
  out.scale = std::abs(out.state_pairing) + bochner_norm(v, system.region(), 2.0) *
                                                bochner_norm(phi, system.region(), 2.0);
  out.relative = out.scale > 0.0 ? out.residual / out.scale : 0.0;
  return out;
}

}  // namespace heatctl
