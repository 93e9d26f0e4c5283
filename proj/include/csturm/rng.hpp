#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace csturm {

// Seeded stream with a platform-independent sequence: mt19937_64 bits are
// mapped to doubles here instead of through <random> distributions, whose
// output differs between standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : g_(seed) {}

  double uniform() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    double r = std::sqrt(-2.0 * std::log(u1)), t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }
  std::complex<double> cnormal() {
    double re = normal();
    return {re, normal()};
  }
  // uniform in the unit disk
  std::complex<double> disk() {
    double r = std::sqrt(uniform()), t = 2.0 * M_PI * uniform();
    return std::polar(r, t);
  }

private:
  std::mt19937_64 g_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace csturm
