#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "csturm/spectra.hpp"

namespace csturm {

// Second-order central differences for -∂² + V on a uniform grid. A regular
// condition α0 f' - α1 f = 0 with α0 ≠ 0 keeps the boundary node and removes
// the ghost value by the centered condition; α0 = 0 drops the node. Weights
// make the matrix complex symmetric: (f|g) = Σ w conj(f) g.
struct FDMatrix {
  std::size_t n = 0;  // grid intervals
  double h = 0.0, lo = 0.0, hi = 0.0;
  std::vector<double> x, w;
  std::vector<cd> lower, diag, upper;
  bool proxy_a = false, proxy_b = false;  // Dirichlet stand-in at an end without condition

  std::size_t size() const { return diag.size(); }
  void apply(const cd* in, cd* out) const;
  Eigen::MatrixXcd dense() const;
};

FDMatrix fd_oracle_build(const Realization& r, std::size_t n);

// All eigenvalues, ordered by |λ|.
std::vector<cd> fd_eigenvalues(const FDMatrix& m);

// Rayleigh-quotient iteration from a guess, using the symmetric bilinear quotient.
cd fd_refine(const FDMatrix& m, cd guess, int max_iter = 60);

// Solution of (M - λ) f = g at the unknown nodes.
std::vector<cd> fd_solve(const FDMatrix& m, cd lambda, const std::vector<cd>& g);

struct RichardsonResult {
  std::vector<cd> extrapolated;
  std::vector<std::vector<cd>> raw;  // raw[j][k]: k-th eigenvalue at grid ns[j]
  std::vector<std::size_t> ns;
};

// `count` smallest-|λ| eigenvalues extrapolated with λ(h) = λ + c h² + d h⁴.
RichardsonResult fd_richardson(const Realization& r, std::size_t count,
                               std::vector<std::size_t> ns = {200, 400, 800});

// Rayleigh quotients (f|Mf)/(f|f) for random complex f: half spread over the
// grid, half localized bumps.
std::vector<cd> fd_numerical_range(const FDMatrix& m, std::size_t samples, std::uint64_t seed = 0);

}  // namespace csturm
