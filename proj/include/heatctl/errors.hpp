#pragma once

#include <stdexcept>
#include <string>

namespace heatctl {

/// Bad sizes, inconsistent meshes, or invalid solver settings.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An argument outside the mathematical domain of an operation (r < 1, q < 1, M <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested variant exists in the theory but not in this toolkit (e.g. u_xi for q = 1).
class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Internal results contradict each other (zero minimizer for a nonzero target).
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Time-optimal bracket [T_lo, T_hi] does not straddle the bound.
class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, double norm_lo, double norm_hi)
      : std::runtime_error(what), norm_at_lo(norm_lo), norm_at_hi(norm_hi) {}
  double norm_at_lo;
  double norm_at_hi;
};

/// The bound M does not exceed the long-horizon limit of the norm curve, so no
/// time-optimal control is expected to exist.
class NoOptimalControl : public std::runtime_error {
 public:
  NoOptimalControl(const std::string& what, double bound_, double limit_)
      : std::runtime_error(what), bound(bound_), limit(limit_) {}
  double bound;
  double limit;
};

}  // namespace heatctl
