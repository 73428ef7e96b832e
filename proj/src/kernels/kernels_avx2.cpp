// Compiled with -mavx2 -mfma; only reached through the dispatch table after
// a runtime CPU check.

#include <immintrin.h>

#include "kernels_internal.hpp"

namespace netputsim::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

double dot(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_sq_diff(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - y[i];
    total += d * d;
  }
  return total;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void affine_rows(const double* b, std::size_t g, std::size_t k, const double* x,
                 std::size_t t, double* y) {
  for (std::size_t r = 0; r < t; ++r) {
    const double* xr = x + r * k;
    for (std::size_t e = 0; e < g; ++e) y[r * g + e] = dot(b + e * k, xr, k);
  }
}

void weighted_cross(const double* e, const double* w, std::size_t t, std::size_t g,
                    double* s) {
  for (std::size_t i = 0; i < g * g; ++i) s[i] = 0.0;
  for (std::size_t r = 0; r < t; ++r) {
    const double* er = e + r * g;
    const double wr = w ? w[r] : 1.0;
    for (std::size_t i = 0; i < g; ++i) {
      const double wi = wr * er[i];
      const __m256d wv = _mm256_set1_pd(wi);
      double* srow = s + i * g;
      std::size_t j = i;
      for (; j + 4 <= g; j += 4) {
        _mm256_storeu_pd(srow + j,
                         _mm256_fmadd_pd(wv, _mm256_loadu_pd(er + j), _mm256_loadu_pd(srow + j)));
      }
      for (; j < g; ++j) srow[j] += wi * er[j];
    }
  }
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < i; ++j) s[i * g + j] = s[j * g + i];
  }
}

}  // namespace netputsim::kernels::avx2
