#pragma once

#include <cmath>

#include "csturm/error.hpp"

namespace csturm::detail {

template <class Vfun, class Gfun>
VolterraSolution volterra_fixed_point(const VolterraPanels& vp, Vfun&& v_minus_lambda, Gfun&& g, cd p0, cd p1,
                                      int max_iter, double tol) {
  const std::size_t n = vp.size();
  const double s = vp.start();
  std::vector<cd> q(n), gv(n), h(n), I0(n), I1(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = v_minus_lambda(vp.x()[i]);
    gv[i] = g(vp.x()[i]);
  }
  VolterraSolution sol;
  sol.f.resize(n);
  sol.fp.resize(n);
  for (std::size_t i = 0; i < n; ++i) sol.f[i] = p0 + p1 * (vp.x()[i] - s);

  // Norm weighted by distance from s so that the semiregular case
  // (p0 = 0, f ~ p1 (x - s)) is measured in |x - s|^{-1} C.
  auto weight = [&](std::size_t i) { return 1.0 / (std::abs(p0) + std::abs(vp.x()[i] - s) + 1e-300); };
  cd I0e, I1e;
  double prev_delta = 0.0;
  int slow = 0;
  for (int it = 1; it <= max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) h[i] = q[i] * sol.f[i] - gv[i];
    vp.apply(h, I0, I1, I0e, I1e);
    double delta = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cd fn = p0 + p1 * (vp.x()[i] - s) + I1[i];
      delta = std::max(delta, std::abs(fn - sol.f[i]) * weight(i));
      scale = std::max(scale, std::abs(fn) * weight(i));
      sol.f[i] = fn;
      sol.fp[i] = p1 + I0[i];
    }
    sol.f_end = p0 + p1 * (vp.edges().back() - s) + I1e;
    sol.fp_end = p1 + I0e;
    sol.iterations = it;
    if (!std::isfinite(delta)) throw DomainError("fixed-point iteration produced non-finite values");
    double rel = delta / std::max(scale, 1e-300);
    if (rel <= tol) return sol;
    if (it > 50 && prev_delta > 0.0 && rel > 0.95 * prev_delta) {
      if (++slow > 20) {
        if (rel <= 1e-11) return sol;  // stalled at rounding level
        throw DomainError("fixed-point iteration is not contracting");
      }
    } else {
      slow = 0;
    }
    prev_delta = rel;
  }
  if (prev_delta > 1e-11) throw DomainError("fixed-point iteration did not converge");
  return sol;
}

}  // namespace csturm::detail
