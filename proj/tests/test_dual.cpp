// Dual functionals, their gradients, the minimizers and the dense Gramian oracle.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "heatctl/dual.hpp"
#include "heatctl/errors.hpp"
#include "support.hpp"

using namespace heatctl;
using heatctl::testing::discrete_eigenvalue;
using heatctl::testing::random_function;
using heatctl::testing::relative_difference;
using heatctl::testing::sine_mode;
using heatctl::testing::unit_mode;

namespace {

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const HeatSystem> make_system(std::size_t n, std::size_t m, double T,
                                              double alpha, double beta,
                                              std::optional<Potential> a = std::nullopt) {
  const SpatialGrid grid(1.0, n);
  const ControlRegion region = (alpha == 0.0 && beta == 1.0) ? ControlRegion::whole(grid)
                                                             : ControlRegion(grid, alpha, beta);
  return std::make_shared<const HeatSystem>(grid, region, a.value_or(Potential::zero(grid)),
                                            TimeMesh(T, m));
}

double closed_form_gramian(double T) {
  const double lam = kPi * kPi;
  return (1.0 - std::exp(-2.0 * lam * T)) / (2.0 * lam);
}

Potential separable_example(const SpatialGrid& grid) {
  return Potential::separable(
      grid, [](double x) { return 2.0 * std::sin(2.0 * kPi * x); },
      TimeProfile::function([](double t) { return std::cos(t); }));
}

}  // namespace

TEST_CASE("J vanishes at z = 0 for every exponent and smoothing") {
  const auto sys = make_system(30, 60, 0.5, 0.3, 0.7);
  std::mt19937_64 rng(1);
  const GridFunction y0 = random_function(sys->grid(), rng);
  for (double q : {1.0, 1.5, 2.0, 3.0}) {
    const DualProblem problem = DualProblem::null_control(sys, y0, q);
    SolverConfig cfg;
    CHECK(evaluate_J(problem, sys->zero_state(), cfg) == 0.0);
  }
}

TEST_CASE("reach-target J with zero target is half the Gramian form") {
  const auto sys = make_system(30, 60, 0.5, 0.3, 0.7);
  std::mt19937_64 rng(2);
  const DualProblem problem = DualProblem::reach_target(sys, sys->zero_state(), 2.0);
  const GridFunction z = random_function(sys->grid(), rng);
  const Trajectory phi = sys->adjoint(z);
  const double gram = std::pow(bochner_norm(phi, sys->region(), 2.0), 2);
  CHECK(relative_difference(evaluate_J(problem, z, SolverConfig{}), 0.5 * gram) < 1e-13);
  CHECK(gram > 0.0);
}

TEST_CASE("null-control kind and reach-target kind coincide for yT = -y(T; y0, 0)") {
  const auto sys = make_system(25, 50, 0.4, 0.3, 0.7);
  std::mt19937_64 rng(3);
  const GridFunction y0 = random_function(sys->grid(), rng);
  const DualProblem null = DualProblem::null_control(sys, y0, 1.5);
  const DualProblem reach = DualProblem::reach_target(sys, -sys->forward_final(y0), 1.5);
  SolverConfig cfg;
  cfg.smoothing = 1e-6;
  for (int k = 0; k < 3; ++k) {
    const GridFunction z = random_function(sys->grid(), rng);
    CHECK(std::abs(evaluate_J(null, z, cfg) - evaluate_J(reach, z, cfg)) <=
          1e-12 * (1.0 + std::abs(evaluate_J(null, z, cfg))));
    CHECK((grad_J(null, z, cfg) - grad_J(reach, z, cfg)).norm() <= 1e-12 * grad_J(null, z, cfg).norm());
  }
}

TEST_CASE("single-mode J matches the scalar closed form") {
  const double T = 0.1;
  const auto sys = make_system(200, 400, T, 0.0, 1.0);
  const GridFunction e = unit_mode(sys->grid());
  const DualProblem problem = DualProblem::null_control(sys, e, 2.0);
  const double g = closed_form_gramian(T);
  const double decay = std::exp(-kPi * kPi * T);
  for (double c : {0.5, 1.0, 3.0, 10.0}) {
    const double expected = 0.5 * c * c * g - c * decay;
    const GridFunction z = -c * e;
    CHECK(relative_difference(evaluate_J(problem, z, SolverConfig{}), expected) < 1e-4);
    // Gradient is (c g - e^{-lambda T}) times -e... i.e. G z + y(T; y0, 0).
    const GridFunction grad = grad_J(problem, z, SolverConfig{});
    const double coeff = grad.inner(e);
    CHECK(relative_difference(coeff, -c * g + decay) < 1e-4);
    CHECK((grad - coeff * e).norm() <= 1e-10 * grad.norm());
  }
}

TEST_CASE("gradient at zero is the free evolution") {
  const auto sys = make_system(30, 60, 0.5, 0.3, 0.7);
  std::mt19937_64 rng(4);
  const GridFunction y0 = random_function(sys->grid(), rng);
  for (double q : {1.5, 2.0, 3.0}) {
    const DualProblem problem = DualProblem::null_control(sys, y0, q);
    const GridFunction g = grad_J(problem, sys->zero_state(), SolverConfig{});
    CHECK((g - sys->forward_final(y0)).norm() == 0.0);
  }
}

TEST_CASE("analytic gradient matches central differences") {
  std::mt19937_64 rng(5);
  const auto sys0 = make_system(20, 40, 0.5, 0.3, 0.7);
  const auto sys1 = make_system(20, 40, 0.5, 0.3, 0.7, separable_example(sys0->grid()));
  for (const auto& sys : {sys0, sys1}) {
    const GridFunction y0 = random_function(sys->grid(), rng);
    for (double q : {1.5, 2.0, 3.0}) {
      const DualProblem problem = DualProblem::null_control(sys, y0, q);
      const SolverConfig cfg;
      for (int trial = 0; trial < 5; ++trial) {
        const GridFunction z = random_function(sys->grid(), rng);
        const GridFunction g = grad_J(problem, z, cfg);
        const double step = 1e-5;
        double err2 = 0.0, ref2 = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
          GridFunction zp = z, zm = z;
          zp[k] += step;
          zm[k] -= step;
          const double fd = (evaluate_J(problem, zp, cfg) - evaluate_J(problem, zm, cfg)) / (2 * step);
          const double exact = sys->grid().h() * g[k];  // coordinate partial derivative
          err2 += (fd - exact) * (fd - exact);
          ref2 += exact * exact;
        }
        CAPTURE(q);
        CHECK(std::sqrt(err2 / ref2) <= 1e-5);
      }
    }
  }
}

TEST_CASE("zero initial state gives the zero minimizer") {
  const auto sys = make_system(20, 40, 0.5, 0.3, 0.7);
  for (double q : {1.0, 1.5, 2.0, 3.0}) {
    const MinimizerResult r =
        minimize_J(DualProblem::null_control(sys, sys->zero_state(), q), SolverConfig{});
    CHECK(r.converged);
    CHECK(r.z_hat.is_zero());
    CHECK(r.value == 0.0);
    CHECK(r.norm == 0.0);
  }
}

TEST_CASE("q = 2 single mode: minimizer and norm match the closed form") {
  const double T = 0.1;
  const auto sys = make_system(200, 400, T, 0.0, 1.0);
  const GridFunction y0 = sine_mode(sys->grid());
  const MinimizerResult r = minimize_J(DualProblem::null_control(sys, y0, 2.0), SolverConfig{});
  REQUIRE(r.converged);
  const double lam = kPi * kPi;
  const double expected =
      std::exp(-lam * T) * std::sqrt(2.0 * lam / (1.0 - std::exp(-2.0 * lam * T)));
  CHECK(relative_difference(r.norm, expected * y0.norm()) < 1e-3);
  const double g = closed_form_gramian(T);
  const GridFunction z_expected = -(std::exp(-lam * T) / g) * y0;
  CHECK((r.z_hat - z_expected).norm() <= 1e-3 * z_expected.norm());

  const ControlSignal u = control_from_minimizer(r);
  const Trajectory phi = sys->adjoint(r.z_hat);
  for (std::size_t k = 0; k < u.raw().size(); ++k) CHECK(u.raw()[k] == phi.raw()[k]);
  CHECK(sys->forward_final(y0, &u).norm() <= 1e-3 * y0.norm());
}

TEST_CASE("conjugate gradients agree with the dense Gramian solve") {
  std::mt19937_64 rng(6);
  const auto base = make_system(20, 40, 0.5, 0.3, 0.7);
  const auto sep = make_system(20, 40, 0.5, 0.3, 0.7, separable_example(base->grid()));
  const auto gen = make_system(
      20, 40, 0.5, 0.3, 0.7,
      Potential::general(base->grid(), [](double x, double t) { return 3.0 * x * std::cos(4.0 * t); }));
  for (const auto& sys : {base, sep, gen}) {
    for (int trial = 0; trial < 3; ++trial) {
      const DualProblem problem = DualProblem::null_control(sys, random_function(sys->grid(), rng), 2.0);
      const SolverConfig cfg;
      const MinimizerResult cg = minimize_J(problem, cfg);
      const GramianSolution dense = gramian_oracle(problem, cfg);
      CHECK(cg.converged);
      CAPTURE((cg.z_hat - dense.z).norm() / dense.z.norm());
      CHECK((cg.z_hat - dense.z).norm() <= 1e-10 * dense.z.norm());
    }
  }
}

TEST_CASE("assembled Gramian is symmetric positive definite") {
  const auto sys = make_system(20, 40, 0.5, 0.0, 1.0);
  std::mt19937_64 rng(7);
  const DualProblem problem = DualProblem::null_control(sys, random_function(sys->grid(), rng), 2.0);
  const GramianSolution dense = gramian_oracle(problem, SolverConfig{});
  CHECK(dense.symmetry_residual <= 1e-12);
  // Positive definiteness through the quadratic form on random vectors.
  for (int k = 0; k < 10; ++k) {
    const GridFunction z = random_function(sys->grid(), rng);
    double form = 0.0;
    for (std::size_t i = 0; i < dense.size; ++i)
      for (std::size_t j = 0; j < dense.size; ++j) form += z[i] * dense.matrix[i * dense.size + j] * z[j];
    CHECK(form > 0.0);
  }
  const GramianSolution zero =
      gramian_oracle(DualProblem::null_control(sys, sys->zero_state(), 2.0), SolverConfig{});
  CHECK(zero.z.is_zero());
}

TEST_CASE("value and norm identities for q in {1.5, 2, 3}") {
  const auto sys = make_system(20, 40, 0.5, 0.3, 0.7);
  std::mt19937_64 rng(8);
  const GridFunction y0 = random_function(sys->grid(), rng);
  for (double q : {1.5, 2.0, 3.0}) {
    CAPTURE(q);
    SolverConfig cfg;
    const MinimizerResult r = minimize_J(DualProblem::null_control(sys, y0, q), cfg);
    REQUIRE(r.converged);
    CHECK(r.value < 0.0);
    CHECK(std::abs(r.value + 0.5 * r.restricted_norm * r.restricted_norm) <=
          cfg.tolerance * r.restricted_norm * r.restricted_norm * 10.0);
    const ControlSignal u = control_from_minimizer(r);
    const double primal = bochner_norm(u, r.p());
    CHECK(std::abs(primal - r.norm) / r.norm <= 10.0 * cfg.tolerance);
    // Nonvanishing restricted adjoint on [0, 0.95 T].
    const auto profile = r.adjoint.restricted_profile(sys->region());
    for (std::size_t j = 0; j <= 38; ++j) CHECK(profile[j] > 0.0);
    // The minimal control steers y0 close to rest.
    CHECK(sys->forward_final(y0, &u).norm() <= 1e-6 * y0.norm());
  }
}

TEST_CASE("q = 1: smoothed minimizations from several starts give the same control") {
  const auto sys = make_system(20, 40, 0.5, 0.3, 0.7);
  std::mt19937_64 rng(9);
  const GridFunction y0 = random_function(sys->grid(), rng);
  SolverConfig cfg;
  cfg.starts = 5;
  cfg.seed = 42;
  const MinimizerResult r = minimize_J(DualProblem::null_control(sys, y0, 1.0), cfg);
  CHECK(r.converged);
  CHECK(r.converged_starts == 5);
  CHECK(r.starts_agreement <= 1e-3);
  CHECK(r.value < 0.0);
}

TEST_CASE("invalid settings are rejected") {
  const auto sys = make_system(20, 40, 0.5, 0.3, 0.7);
  std::mt19937_64 rng(10);
  const GridFunction y0 = random_function(sys->grid(), rng);
  CHECK_THROWS_AS(DualProblem::null_control(sys, y0, 0.5), DomainError);
  SolverConfig no_smoothing;
  no_smoothing.smoothing = 0.0;
  const DualProblem p15 = DualProblem::null_control(sys, y0, 1.5);
  CHECK_THROWS_AS(grad_J(p15, y0, no_smoothing), ConfigurationError);
  CHECK_THROWS_AS(minimize_J(p15, no_smoothing), ConfigurationError);
  CHECK_THROWS_AS(gramian_oracle(p15, SolverConfig{}), ConfigurationError);
  const auto big = make_system(300, 4, 0.01, 0.3, 0.7);
  CHECK_THROWS_AS(gramian_oracle(DualProblem::null_control(big, big->zero_state(), 2.0), SolverConfig{}),
                  ConfigurationError);
  // A zero minimizer claimed for a nonzero target is inconsistent.
  MinimizerResult fake;
  fake.problem = DualProblem::reach_target(sys, y0, 2.0);
  fake.z_hat = sys->zero_state();
  fake.adjoint = sys->adjoint(fake.z_hat);
  CHECK_THROWS_AS(control_from_minimizer(fake), InconsistencyError);
}
