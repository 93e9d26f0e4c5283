#pragma once

// Reference computations that share no code with the library: fixed-step
// RK4, composite Simpson, closed forms for constant potentials.

#include <array>
#include <complex>
#include <functional>
#include <string>

#include "csturm/rng.hpp"

namespace oracle {

using cd = std::complex<double>;
using Fn = std::function<cd(double)>;
using Pair = std::array<cd, 2>;

// f'' = (V - λ) f - g from x0 to x1 with n classical RK4 steps.
Pair rk4(const Fn& V, cd lambda, double x0, Pair y0, double x1, int n, const Fn& g = {});
// (16 y_{2n} - y_n) / 15
Pair rk4_richardson(const Fn& V, cd lambda, double x0, Pair y0, double x1, int n, const Fn& g = {});

cd simpson(const Fn& f, double a, double b, int n);

// (f, f') at x for V ≡ c with f(x0) = f0, f'(x0) = f1.
Pair constant_potential(cd c, cd lambda, double x0, cd f0, cd f1, double x);

// Polynomial with coefficients uniform in the unit disk, as source text.
std::string random_polynomial(csturm::Rng& rng, int degree);
// The same polynomial's coefficients, lowest degree first.
std::vector<cd> random_coefficients(csturm::Rng& rng, int degree);
std::string polynomial_source(const std::vector<cd>& c);

// Second difference -f'' at x from samples f(x-h), f(x), f(x+h).
inline cd minus_second_difference(const Fn& f, double x, double h) {
  return -(f(x - h) - 2.0 * f(x) + f(x + h)) / (h * h);
}

}  // namespace oracle
