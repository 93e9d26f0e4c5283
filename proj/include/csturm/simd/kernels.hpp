#pragma once

#include <complex>
#include <cstddef>

// Data-parallel kernels of the finite-difference oracle. Each has a scalar
// reference and, on x86-64, an AVX2/FMA variant picked at runtime.
// CSTURM_FORCE_SCALAR=1 in the environment pins the scalar path.
namespace csturm::simd {

using cd = std::complex<double>;

enum class Isa { scalar, avx2 };
const char* to_string(Isa isa);

Isa active_isa();
bool avx2_available();  // compiled in and supported by the CPU

// y[i] = lo[i-1] x[i-1] + di[i] x[i] + up[i] x[i+1]; lo and up hold n-1 entries.
void tridiag_matvec(const cd* lo, const cd* di, const cd* up, const cd* x, cd* y, std::size_t n);
// Σ w[i] conj(x[i]) y[i]
cd weighted_dot(const double* w, const cd* x, const cd* y, std::size_t n);
// Σ w[i] |x[i]|²
double weighted_norm2(const double* w, const cd* x, std::size_t n);

namespace scalar {
void tridiag_matvec(const cd* lo, const cd* di, const cd* up, const cd* x, cd* y, std::size_t n);
cd weighted_dot(const double* w, const cd* x, const cd* y, std::size_t n);
double weighted_norm2(const double* w, const cd* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
// Only callable when avx2_available().
void tridiag_matvec(const cd* lo, const cd* di, const cd* up, const cd* x, cd* y, std::size_t n);
cd weighted_dot(const double* w, const cd* x, const cd* y, std::size_t n);
double weighted_norm2(const double* w, const cd* x, std::size_t n);
}  // namespace avx2

}  // namespace csturm::simd
