#include <immintrin.h>

#include "sps/simd.hpp"

namespace sps::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  // lanes (0,2) and (1,3) are paired to mirror the scalar accumulator order
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
}

}  // namespace

double wsum(const double* w, const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * x[i];
  return s;
}

double wdot(const double* w, const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    acc = _mm256_fmadd_pd(wx, _mm256_loadu_pd(y + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

double wdot3(const double* w, const double* x, const double* y, const double* z, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    __m256d wxy = _mm256_mul_pd(wx, _mm256_loadu_pd(y + i));
    acc = _mm256_fmadd_pd(wxy, _mm256_loadu_pd(z + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * x[i] * y[i] * z[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace sps::simd::avx2
