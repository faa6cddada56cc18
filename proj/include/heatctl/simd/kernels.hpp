#pragma once

// Data-parallel inner loops used by the heat solvers and the dual functionals.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is picked once at first use from the CPU
// feature bits; HEATCTL_SIMD=scalar in the environment forces the reference
// path. Results of the two paths agree to rounding (summation order differs).

#include <cstddef>
#include <span>
#include <string_view>

namespace heatctl::simd {

enum class Isa { Scalar, Avx2 };

struct KernelTable {
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_squares)(const double* a, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
  // out_i = diag_i * in_i + off * (in_{i-1} + in_{i+1}), zero Dirichlet ends
  void (*tridiag_apply)(const double* diag, double off, const double* in, double* out,
                        std::size_t n);
  // out = a + alpha * b
  void (*add_scaled)(const double* a, double alpha, const double* b, double* out,
                     std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;
// Null when the build or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels() noexcept;

Isa active_isa() noexcept;
std::string_view isa_name(Isa isa) noexcept;
const KernelTable& kernels() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return kernels().dot(a.data(), b.data(), a.size());
}
inline double sum_squares(std::span<const double> a) {
  return kernels().sum_squares(a.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  kernels().axpy(alpha, x.data(), y.data(), x.size());
}
inline void scale(double alpha, std::span<double> x) {
  kernels().scale(alpha, x.data(), x.size());
}
inline void tridiag_apply(std::span<const double> diag, double off, std::span<const double> in,
                          std::span<double> out) {
  kernels().tridiag_apply(diag.data(), off, in.data(), out.data(), in.size());
}
inline void add_scaled(std::span<const double> a, double alpha, std::span<const double> b,
                       std::span<double> out) {
  kernels().add_scaled(a.data(), alpha, b.data(), out.data(), a.size());
}

}  // namespace heatctl::simd
