#include "heatctl/optim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "heatctl/errors.hpp"
#include "heatctl/simd/kernels.hpp"

namespace heatctl::optim {

namespace {

struct Space {
  double metric;
  double inner(const std::vector<double>& a, const std::vector<double>& b) const {
    return metric * simd::dot(a, b);
  }
  double norm(const std::vector<double>& a) const { return std::sqrt(metric * simd::sum_squares(a)); }
};

void check_options(const Options& o) {
  if (!(o.tolerance > 0.0)) throw ConfigurationError("optimizer tolerance must be positive");
  if (o.max_iterations == 0) throw ConfigurationError("optimizer needs at least one iteration");
  if (!(o.metric > 0.0)) throw ConfigurationError("inner-product weight must be positive");
}

// Minimizer of the cubic interpolating (a, fa, da) and (b, fb, db), safeguarded
// to the interior of [min(a,b), max(a,b)].
double cubic_step(double a, double fa, double da, double b, double fb, double db) {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  double t = 0.5 * (a + b);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = db - da + 2.0 * d2;
    if (denom != 0.0) t = b - (b - a) * (db + d2 - d1) / denom;
  }
  const double margin = 0.1 * (hi - lo);
  if (!std::isfinite(t) || t < lo + margin || t > hi - margin) t = 0.5 * (a + b);
  return t;
}

struct LinePoint {
  double alpha = 0.0;
  double value = 0.0;
  double slope = 0.0;
};

class LineSearch {
 public:
  LineSearch(const Objective& f, const Space& space, const std::vector<double>& x,
             const std::vector<double>& dir, std::size_t& evaluations)
      : f_(f), space_(space), x_(x), dir_(dir), evaluations_(evaluations),
        trial_(x.size()), grad_(x.size()) {}

  // Returns true and leaves the accepted point in trial()/gradient() on success.
  bool run(double f0, double slope0, double alpha0) {
    constexpr double c1 = 1e-4;
    constexpr double c2 = 0.9;
    constexpr int kMaxEvaluations = 40;
    // Roundoff band for the approximate Wolfe test: once f stops changing
    // measurably, the decision is made from the slope alone.
    const double noise = 1e-12 * std::abs(f0) + std::numeric_limits<double>::min();
    const LinePoint origin{0.0, f0, slope0};
    LinePoint prev = origin;
    double alpha = alpha0;
    int count = 0;

    auto sufficient = [&](const LinePoint& p) { return p.value <= f0 + c1 * p.alpha * slope0; };
    auto curvature = [&](const LinePoint& p) { return std::abs(p.slope) <= -c2 * slope0; };
    auto approximate = [&](const LinePoint& p) {
      return p.value <= f0 + noise && p.slope >= c2 * slope0 && p.slope <= -(1.0 - 2.0 * c1) * slope0;
    };

    while (count < kMaxEvaluations) {
      LinePoint cur = evaluate(alpha);
      ++count;
      if (!std::isfinite(cur.value)) {
        alpha = 0.5 * (prev.alpha + alpha);
        continue;
      }
      if (approximate(cur)) return accept(cur);
      if (!sufficient(cur) || (count > 1 && cur.value >= prev.value))
        return zoom(prev, cur, f0, slope0, kMaxEvaluations - count);
      if (curvature(cur)) return accept(cur);
      if (cur.slope >= 0.0) return zoom(cur, prev, f0, slope0, kMaxEvaluations - count);
      prev = cur;
      alpha *= 2.0;
    }
    return false;
  }

  const std::vector<double>& trial() const { return trial_; }
  const std::vector<double>& gradient() const { return grad_; }
  double value() const { return accepted_.value; }
  double alpha() const { return accepted_.alpha; }

 private:
  LinePoint evaluate(double alpha) {
    simd::add_scaled(x_, alpha, dir_, trial_);
    const double v = f_(trial_, grad_);
    ++evaluations_;
    return {alpha, v, space_.inner(grad_, dir_)};
  }

  bool accept(const LinePoint& p) {
    accepted_ = p;
    return true;
  }

  bool zoom(LinePoint lo, LinePoint hi, double f0, double slope0, int budget) {
    constexpr double c1 = 1e-4;
    constexpr double c2 = 0.9;
    const double noise = 1e-12 * std::abs(f0) + std::numeric_limits<double>::min();
    for (int k = 0; k < budget; ++k) {
      const double alpha = cubic_step(lo.alpha, lo.value, lo.slope, hi.alpha, hi.value, hi.slope);
      LinePoint cur = evaluate(alpha);
      if (!std::isfinite(cur.value)) {
        hi = cur;
        hi.value = std::numeric_limits<double>::max();
        continue;
      }
      if (cur.value <= f0 + noise && cur.slope >= c2 * slope0 &&
          cur.slope <= -(1.0 - 2.0 * c1) * slope0)
        return accept(cur);
      if (cur.value > f0 + c1 * alpha * slope0 || cur.value >= lo.value) {
        hi = cur;
      } else {
        if (std::abs(cur.slope) <= -c2 * slope0) return accept(cur);
        if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = cur;
      }
      if (std::abs(hi.alpha - lo.alpha) <= 1e-16 * std::max(1.0, std::abs(lo.alpha))) break;
    }
    // Fall back to the best strictly decreasing point found, if any.
    if (lo.alpha > 0.0 && lo.value < f0) {
      evaluate(lo.alpha);
      return accept(lo);
    }
    return false;
  }

  const Objective& f_;
  const Space& space_;
  const std::vector<double>& x_;
  const std::vector<double>& dir_;
  std::size_t& evaluations_;
  std::vector<double> trial_;
  std::vector<double> grad_;
  LinePoint accepted_;
};

}  // namespace

Result conjugate_gradient(const LinearOperator& A, const std::vector<double>& b,
                          std::vector<double> x0, const Options& options) {
  check_options(options);
  if (x0.size() != b.size()) throw ConfigurationError("CG start has the wrong size");
  const Space space{options.metric};
  const std::size_t n = b.size();
  Result res;
  res.reference_norm = space.norm(b);
  res.x = std::move(x0);
  if (res.reference_norm == 0.0) {
    std::fill(res.x.begin(), res.x.end(), 0.0);
    res.converged = true;
    res.message = "zero right-hand side";
    return res;
  }
  const double target = options.tolerance * res.reference_norm;
  std::vector<double> r(n), p(n), Ap(n);

  auto true_residual = [&]() {
    A(res.x, Ap);
    ++res.evaluations;
    simd::add_scaled(b, -1.0, Ap, r);
    return space.norm(r);
  };

  // Restarted from the true residual whenever the recurrence claims convergence,
  // so the reported gradient norm is never an artifact of residual drift.
  double rnorm = true_residual();
  int stalled = 0;
  while (res.iterations < options.max_iterations) {
    if (rnorm <= target) break;
    p = r;
    double rr = rnorm * rnorm;
    bool claimed = false;
    while (res.iterations < options.max_iterations) {
      A(p, Ap);
      ++res.evaluations;
      ++res.iterations;
      const double pAp = space.inner(p, Ap);
      if (!(pAp > 0.0)) break;  // lost positive curvature: restart from the true residual
      const double alpha = rr / pAp;
      simd::axpy(alpha, p, res.x);
      simd::axpy(-alpha, Ap, r);
      const double rr_new = space.inner(r, r);
      if (std::sqrt(rr_new) <= 0.5 * target) {
        claimed = true;
        break;
      }
      const double beta = rr_new / rr;
      rr = rr_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    }
    const double previous = rnorm;
    rnorm = true_residual();
    // Stop at the rounding floor of the operator: a whole cycle that does not
    // halve the true residual will not be rescued by more restarts.
    if (rnorm > 0.5 * previous && (!claimed || rnorm > target)) {
      if (++stalled >= 3) break;
    } else {
      stalled = 0;
    }
  }
  res.grad_norm = rnorm;
  res.converged = rnorm <= target;
  res.message = res.converged ? "converged" : "iteration limit or stagnation";
  A(res.x, Ap);
  res.value = 0.5 * space.inner(res.x, Ap) - space.inner(b, res.x);
  return res;
}

Result lbfgs(const Objective& f, std::vector<double> x0, const Options& options,
             double reference_norm) {
  check_options(options);
  const Space space{options.metric};
  const std::size_t n = x0.size();
  Result res;
  res.x = std::move(x0);
  std::vector<double> g(n);
  res.value = f(res.x, g);
  res.evaluations = 1;
  double gnorm = space.norm(g);
  res.reference_norm = reference_norm > 0.0 ? reference_norm : gnorm;
  const double target = options.tolerance * res.reference_norm;

  std::deque<std::vector<double>> S, Y;
  std::deque<double> rho;
  std::vector<double> dir(n), q(n), alpha_buf;
  bool restarted = false;

  while (gnorm > target && res.iterations < options.max_iterations) {
    // Two-loop recursion for dir = -H g.
    q = g;
    alpha_buf.assign(S.size(), 0.0);
    for (std::size_t k = S.size(); k-- > 0;) {
      alpha_buf[k] = rho[k] * space.inner(S[k], q);
      simd::axpy(-alpha_buf[k], Y[k], q);
    }
    if (options.preconditioner) {
      std::vector<double> hq(n);
      options.preconditioner(q, hq);
      double gamma = 1.0;
      if (!S.empty()) {
        std::vector<double> hy(n);
        options.preconditioner(Y.back(), hy);
        gamma = space.inner(S.back(), Y.back()) / space.inner(Y.back(), hy);
      }
      q.swap(hq);
      simd::scale(gamma, q);
    } else {
      double gamma = 1.0;
      if (!S.empty()) gamma = space.inner(S.back(), Y.back()) / space.inner(Y.back(), Y.back());
      simd::scale(gamma, q);
    }
    for (std::size_t k = 0; k < S.size(); ++k) {
      const double beta = rho[k] * space.inner(Y[k], q);
      simd::axpy(alpha_buf[k] - beta, S[k], q);
    }
    for (std::size_t i = 0; i < n; ++i) dir[i] = -q[i];
    double slope = space.inner(g, dir);
    if (!(slope < 0.0)) {
      S.clear();
      Y.clear();
      rho.clear();
      for (std::size_t i = 0; i < n; ++i) dir[i] = -g[i];
      slope = -gnorm * gnorm;
    }
    const double alpha0 = (S.empty() && !options.preconditioner) ? std::min(1.0, 1.0 / gnorm) : 1.0;

    LineSearch search(f, space, res.x, dir, res.evaluations);
    if (!search.run(res.value, slope, alpha0)) {
      if (restarted || S.empty()) {
        res.message = "line search failed";
        break;
      }
      S.clear();
      Y.clear();
      rho.clear();
      restarted = true;
      continue;
    }
    restarted = false;
    ++res.iterations;
    std::vector<double> s(n), y(n);
    simd::add_scaled(search.trial(), -1.0, res.x, s);
    simd::add_scaled(search.gradient(), -1.0, g, y);
    res.x = search.trial();
    g = search.gradient();
    res.value = search.value();
    gnorm = space.norm(g);
    const double sy = space.inner(s, y);
    if (sy > 1e-14 * space.norm(s) * space.norm(y)) {
      S.push_back(std::move(s));
      Y.push_back(std::move(y));
      rho.push_back(1.0 / sy);
      if (S.size() > options.memory) {
        S.pop_front();
        Y.pop_front();
        rho.pop_front();
      }
    }
  }
  res.grad_norm = gnorm;
  res.converged = gnorm <= target;
  if (res.converged)
    res.message = "converged";
  else if (res.message.empty())
    res.message = "iteration limit";
  return res;
}

}  // namespace heatctl::optim
