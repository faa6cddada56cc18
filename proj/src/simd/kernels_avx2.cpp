// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "heatctl/simd/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace heatctl::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum_squares_avx2(const double* a, std::size_t n) { return dot_avx2(a, a, n); }

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(double alpha, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= alpha;
}

void tridiag_apply_avx2(const double* diag, double off, const double* in, double* out,
                        std::size_t n) {
  if (n < 3) {
    scalar_kernels().tridiag_apply(diag, off, in, out, n);
    return;
  }
  out[0] = diag[0] * in[0] + off * in[1];
  const __m256d voff = _mm256_set1_pd(off);
  std::size_t i = 1;
  for (; i + 4 < n; i += 4) {
    const __m256d nb = _mm256_add_pd(_mm256_loadu_pd(in + i - 1), _mm256_loadu_pd(in + i + 1));
    const __m256d c = _mm256_mul_pd(_mm256_loadu_pd(diag + i), _mm256_loadu_pd(in + i));
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(voff, nb, c));
  }
  for (; i + 1 < n; ++i) out[i] = diag[i] * in[i] + off * (in[i - 1] + in[i + 1]);
  out[n - 1] = diag[n - 1] * in[n - 1] + off * in[n - 2];
}

void add_scaled_avx2(const double* a, double alpha, const double* b, double* out,
                     std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(b + i), _mm256_loadu_pd(a + i)));
  for (; i < n; ++i) out[i] = a[i] + alpha * b[i];
}

constexpr KernelTable kAvx2{dot_avx2,   sum_squares_avx2,   axpy_avx2,
                            scale_avx2, tridiag_apply_avx2, add_scaled_avx2};

}  // namespace

const KernelTable* avx2_table_if_compiled() noexcept { return &kAvx2; }

}  // namespace heatctl::simd

#else

namespace heatctl::simd {
const KernelTable* avx2_table_if_compiled() noexcept { return nullptr; }
}  // namespace heatctl::simd

#endif
