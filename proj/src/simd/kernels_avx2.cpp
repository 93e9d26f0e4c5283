#include <immintrin.h>

#include "csturm/simd/kernels.hpp"

namespace csturm::simd::avx2 {

namespace {

// Two complex numbers per register: <re0 im0 re1 im1>.
inline __m256d load2(const cd* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cd* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

// a * b
inline __m256d cmul(__m256d a, __m256d b) {
  __m256d ar = _mm256_movedup_pd(a);          // <ar0 ar0 ar1 ar1>
  __m256d ai = _mm256_permute_pd(a, 0b1111);  // <ai0 ai0 ai1 ai1>
  __m256d bs = _mm256_permute_pd(b, 0b0101);  // <bi0 br0 bi1 br1>
  return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bs));
}

// conj(a) * b
inline __m256d cmulc(__m256d a, __m256d b) {
  __m256d ar = _mm256_movedup_pd(a);
  __m256d ai = _mm256_permute_pd(a, 0b1111);
  __m256d bs = _mm256_permute_pd(b, 0b0101);
  return _mm256_fmsubadd_pd(ar, b, _mm256_mul_pd(ai, bs));
}

// <w0 w0 w1 w1>
inline __m256d load_weights(const double* w) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w)), 0b01010000);
}

}  // namespace

void tridiag_matvec(const cd* lo, const cd* di, const cd* up, const cd* x, cd* y, std::size_t n) {
  if (n < 4) return scalar::tridiag_matvec(lo, di, up, x, y, n);
  y[0] = di[0] * x[0] + up[0] * x[1];
  std::size_t i = 1;
  for (; i + 2 < n; i += 2) {
    __m256d t = cmul(load2(lo + i - 1), load2(x + i - 1));
    t = _mm256_add_pd(t, cmul(load2(di + i), load2(x + i)));
    t = _mm256_add_pd(t, cmul(load2(up + i), load2(x + i + 1)));
    store2(y + i, t);
  }
  for (; i + 1 < n; ++i) y[i] = lo[i - 1] * x[i - 1] + di[i] * x[i] + up[i] * x[i + 1];
  y[n - 1] = lo[n - 2] * x[n - 2] + di[n - 1] * x[n - 1];
}

cd weighted_dot(const double* w, const cd* x, const cd* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = _mm256_fmadd_pd(load_weights(w + i), cmulc(load2(x + i), load2(y + i)), acc);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  cd s(lanes[0] + lanes[2], lanes[1] + lanes[3]);
  for (; i < n; ++i) s += w[i] * std::conj(x[i]) * y[i];
  return s;
}

double weighted_norm2(const double* w, const cd* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = load2(x + i);
    acc = _mm256_fmadd_pd(load_weights(w + i), _mm256_mul_pd(v, v), acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += w[i] * std::norm(x[i]);
  return s;
}

}  // namespace csturm::simd::avx2
