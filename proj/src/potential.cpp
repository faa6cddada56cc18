#include "heatctl/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "heatctl/errors.hpp"

namespace heatctl {

namespace {

// Linear interpolation on a uniform table; clamps within one ulp-ish slack at the end.
double interpolate(double spacing, const std::vector<double>& values, double t) {
  const double pos = t / spacing;
  const auto last = static_cast<double>(values.size() - 1);
  if (pos <= 0.0) return values.front();
  if (pos >= last) return values.back();
  const auto k = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(k);
  return (1.0 - frac) * values[k] + frac * values[k + 1];
}

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw ConfigurationError(std::string(what) + " has a non-finite value");
}

}  // namespace

TimeProfile::TimeProfile() : kind_(Kind::Zero) {}

TimeProfile TimeProfile::constant(double c) {
  if (!std::isfinite(c)) throw ConfigurationError("constant a2 must be finite");
  TimeProfile p;
  if (c != 0.0) {
    p.kind_ = Kind::Constant;
    p.constant_ = c;
  }
  return p;
}

TimeProfile TimeProfile::function(std::function<double(double)> f) {
  if (!f) throw ConfigurationError("a2 function is empty");
  TimeProfile p;
  p.kind_ = Kind::Function;
  p.fn_ = std::move(f);
  return p;
}

TimeProfile TimeProfile::samples(double spacing, std::vector<double> values) {
  if (!(spacing > 0.0)) throw ConfigurationError("a2 sample spacing must be positive");
  if (values.size() < 2) throw ConfigurationError("a2 needs at least two samples");
  require_finite(values, "a2 sample table");
  TimeProfile p;
  p.kind_ = Kind::Samples;
  p.spacing_ = spacing;
  p.samples_ = std::move(values);
  return p;
}

double TimeProfile::operator()(double t) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return constant_;
    case Kind::Function:
      return fn_(t);
    case Kind::Samples:
      return interpolate(spacing_, samples_, t);
  }
  return 0.0;
}

double TimeProfile::defined_until() const noexcept {
  if (kind_ == Kind::Samples) return spacing_ * static_cast<double>(samples_.size() - 1);
  return std::numeric_limits<double>::infinity();
}

std::vector<double> TimeProfile::tail_integrals(const TimeMesh& mesh) const {
  std::vector<double> tail(mesh.steps() + 1, 0.0);
  if (is_zero()) return tail;
  for (std::size_t j = mesh.steps(); j-- > 0;)
    tail[j] = tail[j + 1] + mesh.dt() * (*this)(mesh.midpoint(j));
  return tail;
}

Potential Potential::zero(const SpatialGrid& grid) {
  Potential p;
  p.kind_ = Kind::Zero;
  p.xs_.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) p.xs_[i] = grid.x(i);
  p.a1_.assign(grid.size(), 0.0);
  return p;
}

Potential Potential::separable(const SpatialGrid& grid, std::vector<double> a1, TimeProfile a2) {
  if (a1.size() != grid.size())
    throw ConfigurationError("a1 has " + std::to_string(a1.size()) + " samples, grid has " +
                             std::to_string(grid.size()) + " nodes");
  require_finite(a1, "a1");
  Potential p = zero(grid);
  p.a1_ = std::move(a1);
  p.a2_ = std::move(a2);
  const bool a1_zero = std::all_of(p.a1_.begin(), p.a1_.end(), [](double v) { return v == 0.0; });
  p.kind_ = (a1_zero && p.a2_.is_zero()) ? Kind::Zero : Kind::Separable;
  return p;
}

Potential Potential::separable(const SpatialGrid& grid, const std::function<double(double)>& a1,
                               TimeProfile a2) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = a1(grid.x(i));
  return separable(grid, std::move(v), std::move(a2));
}

Potential Potential::general(const SpatialGrid& grid, Field a) {
  if (!a) throw ConfigurationError("general potential field is empty");
  Potential p = zero(grid);
  p.kind_ = Kind::General;
  p.a1_.clear();
  p.field_ = std::move(a);
  return p;
}

Potential Potential::general_table(const SpatialGrid& grid, double spacing,
                                   std::vector<std::vector<double>> rows) {
  if (!(spacing > 0.0)) throw ConfigurationError("potential table spacing must be positive");
  if (rows.size() < 2) throw ConfigurationError("potential table needs at least two time rows");
  for (const auto& row : rows) {
    if (row.size() != grid.size())
      throw ConfigurationError("potential table row has " + std::to_string(row.size()) +
                               " values, grid has " + std::to_string(grid.size()) + " nodes");
    require_finite(row, "potential table");
  }
  Potential p = zero(grid);
  p.kind_ = Kind::General;
  p.a1_.clear();
  p.table_spacing_ = spacing;
  p.table_ = std::move(rows);
  return p;
}

std::vector<double> Potential::sample(double t) const {
  const std::size_t n = xs_.size();
  std::vector<double> out(n);
  if (kind_ != Kind::General) {
    const double shift = a2_(t);
    for (std::size_t i = 0; i < n; ++i) out[i] = a1_[i] + shift;
    return out;
  }
  if (field_) {
    for (std::size_t i = 0; i < n; ++i) out[i] = field_(xs_[i], t);
    return out;
  }
  const double pos = t / table_spacing_;
  const auto last = static_cast<double>(table_.size() - 1);
  const double clamped = std::clamp(pos, 0.0, last);
  const auto k = std::min(static_cast<std::size_t>(clamped), table_.size() - 2);
  const double frac = clamped - static_cast<double>(k);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = (1.0 - frac) * table_[k][i] + frac * table_[k + 1][i];
  return out;
}

double Potential::sup_norm(double horizon) const {
  if (kind_ == Kind::Zero) return 0.0;
  constexpr std::size_t kSamples = 1000;
  const std::size_t count = (kind_ == Kind::Separable && a2_.is_zero()) ? 1 : kSamples + 1;
  double peak = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = horizon * static_cast<double>(k) / static_cast<double>(kSamples);
    for (double v : sample(t)) peak = std::max(peak, std::abs(v));
  }
  return peak;
}

Potential Potential::spatial_part() const {
  if (kind_ == Kind::General)
    throw UnsupportedError("a general potential has no separable spatial part");
  Potential p = *this;
  p.a2_ = TimeProfile();
  const bool a1_zero = std::all_of(a1_.begin(), a1_.end(), [](double v) { return v == 0.0; });
  p.kind_ = a1_zero ? Kind::Zero : Kind::Separable;
  return p;
}

void Potential::check_horizon(double horizon) const {
  double until = std::numeric_limits<double>::infinity();
  if (kind_ == Kind::Separable) until = a2_.defined_until();
  if (kind_ == Kind::General && !field_)
    until = table_spacing_ * static_cast<double>(table_.size() - 1);
  if (horizon > until * (1.0 + 1e-12))
    throw ConfigurationError("potential is defined up to t = " + std::to_string(until) +
                             " but the horizon is " + std::to_string(horizon));
}

}  // namespace heatctl
