// Equivalence of the AVX2 kernels with the scalar reference loops.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "heatctl/simd/kernels.hpp"

using heatctl::simd::KernelTable;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("dispatch reports a usable table") {
  const auto isa = heatctl::simd::active_isa();
  CHECK((heatctl::simd::isa_name(isa) == "avx2" || heatctl::simd::isa_name(isa) == "scalar"));
  if (isa == heatctl::simd::Isa::Avx2) CHECK(heatctl::simd::avx2_kernels() != nullptr);
}

TEST_CASE("scalar reference kernels compute the textbook loops") {
  const KernelTable& k = heatctl::simd::scalar_kernels();
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> b{4, -5, 6};
  CHECK(k.dot(a.data(), b.data(), 3) == doctest::Approx(12.0));
  CHECK(k.sum_squares(a.data(), 3) == doctest::Approx(14.0));
  std::vector<double> y = b;
  k.axpy(2.0, a.data(), y.data(), 3);
  CHECK(y == std::vector<double>{6, -1, 12});
  std::vector<double> out(3);
  const std::vector<double> diag{2, 2, 2};
  k.tridiag_apply(diag.data(), -1.0, a.data(), out.data(), 3);
  CHECK(out == std::vector<double>{0, 0, 4});
  k.add_scaled(a.data(), -1.0, b.data(), out.data(), 3);
  CHECK(out == std::vector<double>{-3, 7, -3});
  std::vector<double> s = a;
  k.scale(0.5, s.data(), 3);
  CHECK(s == std::vector<double>{0.5, 1.0, 1.5});
}

TEST_CASE("AVX2 kernels agree with the scalar reference on every length and tail") {
  const KernelTable* fast = heatctl::simd::avx2_kernels();
  if (!fast) {
    MESSAGE("AVX2/FMA not available on this machine or build; equivalence test skipped");
    return;
  }
  const KernelTable& ref = heatctl::simd::scalar_kernels();
  std::mt19937_64 rng(12345);
  for (std::size_t n = 0; n <= 67; ++n) {
    CAPTURE(n);
    const auto a = random_vector(n, rng);
    const auto b = random_vector(n, rng);
    const auto diag = random_vector(n, rng);
    const double scale = static_cast<double>(n) + 1.0;

    CHECK(std::abs(fast->dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <=
          1e-14 * scale);
    CHECK(std::abs(fast->sum_squares(a.data(), n) - ref.sum_squares(a.data(), n)) <=
          1e-14 * scale);

    auto y1 = b, y2 = b;
    fast->axpy(0.37, a.data(), y1.data(), n);
    ref.axpy(0.37, a.data(), y2.data(), n);
    CHECK(max_abs_diff(y1, y2) <= 1e-15);

    auto s1 = a, s2 = a;
    fast->scale(-1.7, s1.data(), n);
    ref.scale(-1.7, s2.data(), n);
    CHECK(max_abs_diff(s1, s2) == 0.0);

    std::vector<double> o1(n), o2(n);
    fast->tridiag_apply(diag.data(), 0.8, a.data(), o1.data(), n);
    ref.tridiag_apply(diag.data(), 0.8, a.data(), o2.data(), n);
    CHECK(max_abs_diff(o1, o2) <= 1e-15);

    fast->add_scaled(a.data(), 2.5, b.data(), o1.data(), n);
    ref.add_scaled(a.data(), 2.5, b.data(), o2.data(), n);
    CHECK(max_abs_diff(o1, o2) <= 1e-15);
  }
}
