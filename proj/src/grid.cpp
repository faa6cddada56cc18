#include "heatctl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heatctl/errors.hpp"
#include "heatctl/simd/kernels.hpp"

namespace heatctl {

SpatialGrid::SpatialGrid(double length, std::size_t nodes) : length_(length), n_(nodes) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw ConfigurationError("grid length must be positive and finite");
  if (nodes < 3) throw ConfigurationError("grid needs at least 3 interior nodes");
  h_ = length / static_cast<double>(nodes + 1);
}

ControlRegion::ControlRegion(const SpatialGrid& grid, double alpha, double beta)
    : alpha_(alpha), beta_(beta) {
  if (!(alpha >= 0.0) || !(beta <= grid.length()) || !(alpha < beta))
    throw ConfigurationError("control region needs 0 <= alpha < beta <= L, got [" +
                             std::to_string(alpha) + ", " + std::to_string(beta) + "]");
  const double slack = 1e-12 * grid.length();
  first_ = grid.size();
  last_ = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    if (x >= alpha - slack && x <= beta + slack) {
      first_ = std::min(first_, i);
      last_ = i + 1;
    }
  }
  if (last_ <= first_) throw ConfigurationError("control region contains no grid node");
}

ControlRegion ControlRegion::whole(const SpatialGrid& grid) {
  return ControlRegion(grid, 0.0, grid.length());
}

TimeMesh::TimeMesh(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon))
    throw ConfigurationError("time horizon must be positive and finite");
  if (steps < 2) throw ConfigurationError("time mesh needs at least 2 steps");
}

GridFunction::GridFunction(const SpatialGrid& grid) : h_(grid.h()), values_(grid.size(), 0.0) {}

GridFunction::GridFunction(const SpatialGrid& grid, std::vector<double> values)
    : h_(grid.h()), values_(std::move(values)) {
  if (values_.size() != grid.size())
    throw ConfigurationError("grid function has " + std::to_string(values_.size()) +
                             " values, grid has " + std::to_string(grid.size()) + " nodes");
}

GridFunction::GridFunction(double h, std::vector<double> values)
    : h_(h), values_(std::move(values)) {}

GridFunction GridFunction::sample(const SpatialGrid& grid,
                                  const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.x(i));
  return GridFunction(grid, std::move(v));
}

void GridFunction::check_same_size(const GridFunction& other) const {
  if (other.size() != size())
    throw ConfigurationError("grid function size mismatch: " + std::to_string(size()) + " vs " +
                             std::to_string(other.size()));
}

double GridFunction::inner(const GridFunction& other) const {
  check_same_size(other);
  return h_ * simd::dot(values_, other.values_);
}

double GridFunction::norm() const { return std::sqrt(h_ * simd::sum_squares(values_)); }

double GridFunction::restricted_inner(const GridFunction& other,
                                      const ControlRegion& region) const {
  check_same_size(other);
  const std::span<const double> a(values_);
  const std::span<const double> b(other.values_);
  return h_ * simd::dot(a.subspan(region.first(), region.count()),
                        b.subspan(region.first(), region.count()));
}

double GridFunction::restricted_norm(const ControlRegion& region) const {
  const std::span<const double> a(values_);
  return std::sqrt(h_ * simd::sum_squares(a.subspan(region.first(), region.count())));
}

bool GridFunction::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

bool GridFunction::finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

GridFunction& GridFunction::operator+=(const GridFunction& other) { return add_scaled(1.0, other); }

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  return add_scaled(-1.0, other);
}

GridFunction& GridFunction::operator*=(double c) {
  simd::scale(c, values_);
  return *this;
}

GridFunction& GridFunction::add_scaled(double alpha, const GridFunction& x) {
  check_same_size(x);
  simd::axpy(alpha, x.values_, values_);
  return *this;
}

SpaceTimeField::SpaceTimeField(const SpatialGrid& grid, const TimeMesh& mesh)
    : mesh_(mesh), n_(grid.size()), h_(grid.h()), data_((mesh.steps() + 1) * grid.size(), 0.0) {}

GridFunction SpaceTimeField::at(std::size_t j) const {
  const auto s = state(j);
  return GridFunction(h_, std::vector<double>(s.begin(), s.end()));
}

void SpaceTimeField::set(std::size_t j, const GridFunction& f) {
  if (f.size() != n_) throw ConfigurationError("state size mismatch");
  std::copy(f.values().begin(), f.values().end(), state(j).begin());
}

std::vector<double> SpaceTimeField::profile() const {
  std::vector<double> p(time_nodes());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::sqrt(h_ * simd::sum_squares(state(j)));
  return p;
}

std::vector<double> SpaceTimeField::restricted_profile(const ControlRegion& region) const {
  std::vector<double> p(time_nodes());
  for (std::size_t j = 0; j < p.size(); ++j)
    p[j] = std::sqrt(h_ * simd::sum_squares(state(j).subspan(region.first(), region.count())));
  return p;
}

void ControlSignal::restrict_to(const ControlRegion& region) {
  for (std::size_t j = 0; j < time_nodes(); ++j) {
    auto s = state(j);
    std::fill(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(region.first()), 0.0);
    std::fill(s.begin() + static_cast<std::ptrdiff_t>(region.last()), s.end(), 0.0);
  }
  restricted_ = true;
}

ControlSignal& ControlSignal::operator*=(double c) {
  simd::scale(c, data_);
  return *this;
}

double bochner_norm(std::span<const double> profile, const TimeMesh& mesh, double r,
                    std::size_t start) {
  if (!(r >= 1.0)) throw DomainError("Bochner exponent must satisfy r >= 1");
  if (profile.size() != mesh.steps() + 1)
    throw ConfigurationError("profile length does not match the time mesh");
  if (std::isinf(r)) {
    double peak = 0.0;
    for (std::size_t j = start; j < profile.size(); ++j) peak = std::max(peak, profile[j]);
    return peak;
  }
  double acc = 0.0;
  if (r == 2.0) {
    for (std::size_t j = start; j < profile.size(); ++j)
      acc += mesh.weight(j, start) * profile[j] * profile[j];
    return std::sqrt(acc);
  }
  if (r == 1.0) {
    for (std::size_t j = start; j < profile.size(); ++j) acc += mesh.weight(j, start) * profile[j];
    return acc;
  }
  for (std::size_t j = start; j < profile.size(); ++j)
    acc += mesh.weight(j, start) * std::pow(profile[j], r);
  return std::pow(acc, 1.0 / r);
}

double bochner_norm(const ControlSignal& signal, double r) {
  return bochner_norm(signal.profile(), signal.mesh(), r);
}

double bochner_norm(const SpaceTimeField& field, const ControlRegion& region, double r) {
  return bochner_norm(field.restricted_profile(region), field.mesh(), r);
}

}  // namespace heatctl
