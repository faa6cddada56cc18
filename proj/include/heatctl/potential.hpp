#pragma once

// The potential a(x,t) of y_t - y_xx + a y = chi_omega u.
//
// Two storage forms are supported: a separable potential a1(x) + a2(t), where
// the time part is handled by an exact integrating factor per step, and a
// general space-time potential frozen at each step midpoint.

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "heatctl/grid.hpp"

namespace heatctl {

/// Real function of time used as the a2 part of a separable potential.
class TimeProfile {
 public:
  TimeProfile();  // identically zero
  static TimeProfile constant(double c);
  static TimeProfile function(std::function<double(double)> f);
  /// Samples at t_k = k * spacing, linearly interpolated; defined on [0, spacing*(size-1)].
  static TimeProfile samples(double spacing, std::vector<double> values);

  double operator()(double t) const;
  bool is_zero() const noexcept { return kind_ == Kind::Zero; }
  /// Largest time the profile is defined at (infinity for closed-form profiles).
  double defined_until() const noexcept;
  /// Midpoint-rule tail integral sum_{k >= j} dt * a2(t_k + dt/2) for every node j of mesh.
  std::vector<double> tail_integrals(const TimeMesh& mesh) const;

 private:
  enum class Kind { Zero, Constant, Function, Samples };
  Kind kind_;
  double constant_ = 0.0;
  std::function<double(double)> fn_;
  double spacing_ = 0.0;
  std::vector<double> samples_;
};

class Potential {
 public:
  enum class Kind { Zero, Separable, General };
  using Field = std::function<double(double x, double t)>;

  /// a = 0.
  static Potential zero(const SpatialGrid& grid);
  /// a(x,t) = a1(x) + a2(t).
  static Potential separable(const SpatialGrid& grid, std::vector<double> a1, TimeProfile a2);
  static Potential separable(const SpatialGrid& grid, const std::function<double(double)>& a1,
                             TimeProfile a2);
  /// a(x,t) given as a closed-form field.
  static Potential general(const SpatialGrid& grid, Field a);
  /// a(x_i, t_k) from a table with rows at t_k = k * spacing, linear in time.
  static Potential general_table(const SpatialGrid& grid, double spacing,
                                 std::vector<std::vector<double>> rows);

  Kind kind() const noexcept { return kind_; }
  bool is_separable() const noexcept { return kind_ != Kind::General; }
  bool is_zero() const noexcept { return kind_ == Kind::Zero; }
  std::size_t nodes() const noexcept { return xs_.size(); }

  /// Spatial part a1 (zero vector for the zero potential; empty for general).
  const std::vector<double>& a1() const noexcept { return a1_; }
  /// Time part a2 (zero profile unless separable).
  const TimeProfile& a2() const noexcept { return a2_; }
  /// a(x_i, t) on every interior node.
  std::vector<double> sample(double t) const;
  /// max |a(x_i, t_k)| over the nodes and a fine sampling of [0, horizon].
  double sup_norm(double horizon) const;
  /// Separable potential keeping only a1 (the gauge frame). Throws for general potentials.
  Potential spatial_part() const;
  /// Throws ConfigurationError if the potential is not defined on [0, horizon].
  void check_horizon(double horizon) const;

 private:
  Potential() = default;

  Kind kind_ = Kind::Zero;
  std::vector<double> xs_;
  std::vector<double> a1_;
  TimeProfile a2_;
  Field field_;
  double table_spacing_ = 0.0;
  std::vector<std::vector<double>> table_;
};

}  // namespace heatctl
