#pragma once

// Unconstrained minimizers used by the dual problems: conjugate gradients for
// the quadratic (q = 2) case and limited-memory BFGS with a Wolfe line search
// for the smooth convex (q != 2) case.
//
// Both work on plain coefficient vectors with the inner product
// metric * sum a_i b_i; gradients must be given in that same inner product.
// Convergence means ||grad|| <= tolerance * reference, where the reference is
// the gradient norm at the origin of the problem (supplied by the caller) or,
// if absent, at the starting point.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace heatctl::optim {

/// out = H0 in, an SPD approximation of the inverse Hessian.
using Preconditioner =
    std::function<void(const std::vector<double>& in, std::vector<double>& out)>;

struct Options {
  double tolerance = 1e-10;
  std::size_t max_iterations = 2000;
  std::size_t memory = 20;  // L-BFGS correction pairs
  double metric = 1.0;      // inner-product weight
  Preconditioner preconditioner;  // L-BFGS initial inverse Hessian (identity if empty)
};

struct Result {
  std::vector<double> x;
  double value = 0.0;
  double grad_norm = 0.0;
  double reference_norm = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
  std::string message;
};

/// f(x), writing the gradient into grad (already sized).
using Objective = std::function<double(const std::vector<double>& x, std::vector<double>& grad)>;
/// out = A in for a symmetric positive definite A (in the metric inner product).
using LinearOperator =
    std::function<void(const std::vector<double>& in, std::vector<double>& out)>;

/// Solves A x = b by conjugate gradients from x0. The residual b - A x plays the role of
/// the negative gradient of 1/2 <Ax,x> - <b,x>; the reference norm is ||b||.
Result conjugate_gradient(const LinearOperator& A, const std::vector<double>& b,
                          std::vector<double> x0, const Options& options);

/// Minimizes a smooth function by L-BFGS with a strong-Wolfe line search. A
/// non-positive reference_norm means "use the gradient norm at x0".
Result lbfgs(const Objective& f, std::vector<double> x0, const Options& options,
             double reference_norm = 0.0);

}  // namespace heatctl::optim
