#include "heatctl/simd/kernels.hpp"

namespace heatctl::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_squares_scalar(const double* a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * a[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

void tridiag_apply_scalar(const double* diag, double off, const double* in, double* out,
                          std::size_t n) {
  if (n == 0) return;
  if (n == 1) {
    out[0] = diag[0] * in[0];
    return;
  }
  out[0] = diag[0] * in[0] + off * in[1];
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = diag[i] * in[i] + off * (in[i - 1] + in[i + 1]);
  out[n - 1] = diag[n - 1] * in[n - 1] + off * in[n - 2];
}

void add_scaled_scalar(const double* a, double alpha, const double* b, double* out,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + alpha * b[i];
}

constexpr KernelTable kScalar{dot_scalar,   sum_squares_scalar,   axpy_scalar,
                              scale_scalar, tridiag_apply_scalar, add_scaled_scalar};

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

}  // namespace heatctl::simd
