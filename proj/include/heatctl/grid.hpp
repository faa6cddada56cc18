#pragma once

// Discrete spaces: the interval mesh, the control interval, the uniform time
// mesh, grid functions with the h-weighted L2 product, and space-time fields.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace heatctl {

/// Uniform mesh of (0, L) with n interior nodes; Dirichlet nodes are not stored.
class SpatialGrid {
 public:
  SpatialGrid(double length, std::size_t nodes);

  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  double x(std::size_t i) const noexcept { return static_cast<double>(i + 1) * h_; }

  bool operator==(const SpatialGrid&) const = default;

 private:
  double length_;
  std::size_t n_;
  double h_;
};

/// The control set omega as a closed interval [alpha, beta]. Its node mask is
/// the contiguous index range [first, last).
class ControlRegion {
 public:
  ControlRegion(const SpatialGrid& grid, double alpha, double beta);
  static ControlRegion whole(const SpatialGrid& grid);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  std::size_t first() const noexcept { return first_; }
  std::size_t last() const noexcept { return last_; }
  std::size_t count() const noexcept { return last_ - first_; }
  bool contains(std::size_t i) const noexcept { return i >= first_ && i < last_; }
  bool is_whole(const SpatialGrid& grid) const noexcept {
    return first_ == 0 && last_ == grid.size();
  }

 private:
  double alpha_;
  double beta_;
  std::size_t first_;
  std::size_t last_;
};

/// t_j = j * T / m, j = 0..m.
class TimeMesh {
 public:
  TimeMesh(double horizon, std::size_t steps);

  double horizon() const noexcept { return horizon_; }
  std::size_t steps() const noexcept { return steps_; }
  double dt() const noexcept { return horizon_ / static_cast<double>(steps_); }
  double t(std::size_t j) const noexcept { return static_cast<double>(j) * dt(); }
  double midpoint(std::size_t j) const noexcept { return (static_cast<double>(j) + 0.5) * dt(); }
  /// Trapezoid weight of node j on the sub-interval [t_start, T].
  double weight(std::size_t j, std::size_t start = 0) const noexcept {
    if (j < start) return 0.0;
    if (start == steps_) return 0.0;
    return (j == start || j == steps_) ? 0.5 * dt() : dt();
  }

  bool operator==(const TimeMesh&) const = default;

 private:
  double horizon_;
  std::size_t steps_;
};

/// Element of L2(0, L) on the interior nodes. <f, g> = h * sum f_i g_i.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(const SpatialGrid& grid);
  GridFunction(const SpatialGrid& grid, std::vector<double> values);
  GridFunction(double h, std::vector<double> values);

  static GridFunction sample(const SpatialGrid& grid, const std::function<double(double)>& f);

  std::size_t size() const noexcept { return values_.size(); }
  double h() const noexcept { return h_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  double inner(const GridFunction& other) const;
  double norm() const;
  double restricted_inner(const GridFunction& other, const ControlRegion& region) const;
  double restricted_norm(const ControlRegion& region) const;
  bool is_zero() const noexcept;
  bool finite() const noexcept;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double c);
  /// this += alpha * x
  GridFunction& add_scaled(double alpha, const GridFunction& x);

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(double c, GridFunction a) { return a *= c; }
  friend GridFunction operator-(GridFunction a) { return a *= -1.0; }

 private:
  void check_same_size(const GridFunction& other) const;

  double h_ = 0.0;
  std::vector<double> values_;
};

/// m+1 grid functions on a time mesh, stored contiguously by time node.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  SpaceTimeField(const SpatialGrid& grid, const TimeMesh& mesh);

  const TimeMesh& mesh() const noexcept { return mesh_; }
  std::size_t nodes() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  std::size_t time_nodes() const noexcept { return mesh_.steps() + 1; }

  std::span<double> state(std::size_t j) noexcept { return {data_.data() + j * n_, n_}; }
  std::span<const double> state(std::size_t j) const noexcept {
    return {data_.data() + j * n_, n_};
  }
  GridFunction at(std::size_t j) const;
  void set(std::size_t j, const GridFunction& f);

  /// ||s(t_j)|| over the whole interval, for every node.
  std::vector<double> profile() const;
  /// ||s(t_j)||_omega for every node.
  std::vector<double> restricted_profile(const ControlRegion& region) const;

  std::span<double> raw() noexcept { return data_; }
  std::span<const double> raw() const noexcept { return data_; }

 protected:
  TimeMesh mesh_{1.0, 2};
  std::size_t n_ = 0;
  double h_ = 0.0;
  std::vector<double> data_;
};

/// Discrete y(.; y0, u) or phi(.; T, z); state(0) is t = 0 and state(m) is t = T.
class Trajectory : public SpaceTimeField {
 public:
  using SpaceTimeField::SpaceTimeField;
};

/// Time-sampled control. When restricted(), entries outside omega are zero.
class ControlSignal : public SpaceTimeField {
 public:
  ControlSignal() = default;
  ControlSignal(const SpatialGrid& grid, const TimeMesh& mesh, bool restricted = false)
      : SpaceTimeField(grid, mesh), restricted_(restricted) {}
  /// Copy of an arbitrary field (e.g. an adjoint trajectory) as an unrestricted signal.
  explicit ControlSignal(const SpaceTimeField& field) : SpaceTimeField(field) {}

  bool restricted() const noexcept { return restricted_; }
  /// Zero every entry outside omega and mark the signal as restricted.
  void restrict_to(const ControlRegion& region);
  ControlSignal& operator*=(double c);

 private:
  bool restricted_ = false;
};

/// (sum_j w_j p_j^r)^(1/r) with trapezoid weights, or max_j p_j for r = inf.
double bochner_norm(std::span<const double> profile, const TimeMesh& mesh, double r,
                    std::size_t start = 0);
/// ||u||_{L^r(0,T;L2(Omega))}.
double bochner_norm(const ControlSignal& signal, double r);
/// ||chi_omega s||_{L^r(0,T;L2(omega))}.
double bochner_norm(const SpaceTimeField& field, const ControlRegion& region, double r);

}  // namespace heatctl
