#include "csturm/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace csturm::simd {

const char* to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

namespace scalar {

void tridiag_matvec(const cd* lo, const cd* di, const cd* up, const cd* x, cd* y, std::size_t n) {
  if (n == 0) return;
  if (n == 1) {
    y[0] = di[0] * x[0];
    return;
  }
  y[0] = di[0] * x[0] + up[0] * x[1];
  for (std::size_t i = 1; i + 1 < n; ++i) y[i] = lo[i - 1] * x[i - 1] + di[i] * x[i] + up[i] * x[i + 1];
  y[n - 1] = lo[n - 2] * x[n - 2] + di[n - 1] * x[n - 1];
}

cd weighted_dot(const double* w, const cd* x, const cd* y, std::size_t n) {
  cd s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * std::conj(x[i]) * y[i];
  return s;
}

double weighted_norm2(const double* w, const cd* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * std::norm(x[i]);
  return s;
}

}  // namespace scalar

#ifndef CSTURM_WITH_AVX2
namespace avx2 {
void tridiag_matvec(const cd*, const cd*, const cd*, const cd*, cd*, std::size_t) {
  throw std::logic_error("AVX2 kernels not compiled in");
}
cd weighted_dot(const double*, const cd*, const cd*, std::size_t) {
  throw std::logic_error("AVX2 kernels not compiled in");
}
double weighted_norm2(const double*, const cd*, std::size_t) {
  throw std::logic_error("AVX2 kernels not compiled in");
}
}  // namespace avx2
#endif

bool avx2_available() {
#if defined(CSTURM_WITH_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

Isa detect() {
  const char* force = std::getenv("CSTURM_FORCE_SCALAR");
  if (force && *force && std::strcmp(force, "0") != 0) return Isa::scalar;
  return avx2_available() ? Isa::avx2 : Isa::scalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

void tridiag_matvec(const cd* lo, const cd* di, const cd* up, const cd* x, cd* y, std::size_t n) {
  if (active_isa() == Isa::avx2) return avx2::tridiag_matvec(lo, di, up, x, y, n);
  scalar::tridiag_matvec(lo, di, up, x, y, n);
}

cd weighted_dot(const double* w, const cd* x, const cd* y, std::size_t n) {
  if (active_isa() == Isa::avx2) return avx2::weighted_dot(w, x, y, n);
  return scalar::weighted_dot(w, x, y, n);
}

double weighted_norm2(const double* w, const cd* x, std::size_t n) {
  if (active_isa() == Isa::avx2) return avx2::weighted_norm2(w, x, n);
  return scalar::weighted_norm2(w, x, n);
}

}  // namespace csturm::simd
