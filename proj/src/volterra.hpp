#pragma once

// Gauss-Legendre panel discretization of Volterra operators started at s:
//   I0[h](x) = ∫_s^x h(y) dy,   I1[h](x) = ∫_s^x (x - y) h(y) dy.

#include <vector>

#include "csturm/expr.hpp"
#include "csturm/quadrature.hpp"

namespace csturm::detail {

class VolterraPanels {
public:
  // edges[0] = s; edges monotone (either direction).
  VolterraPanels(std::vector<double> edges, int m);

  int m() const { return m_; }
  std::size_t panels() const { return edges_.size() - 1; }
  std::size_t size() const { return x_.size(); }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& edges() const { return edges_; }
  double start() const { return edges_.front(); }

  // Values at the nodes, then at the last edge in I0_end / I1_end.
  void apply(const std::vector<cd>& h, std::vector<cd>& I0, std::vector<cd>& I1, cd& I0_end,
             cd& I1_end) const;

private:
  std::vector<double> edges_;
  int m_;
  GaussLegendre gl_;
  std::vector<double> x_;
  std::vector<double> a0_, a1_;  // m x m reference partial-integral matrices
};

// Fixed point f = p0 + p1 (x - s) + I1[(V - λ) f - g] at the nodes.
struct VolterraSolution {
  std::vector<cd> f, fp;
  cd f_end, fp_end;
  int iterations = 0;
};

template <class Vfun, class Gfun>
VolterraSolution volterra_fixed_point(const VolterraPanels& vp, Vfun&& v_minus_lambda, Gfun&& g, cd p0, cd p1,
                                      int max_iter = 400, double tol = 1e-15);

}  // namespace csturm::detail

#include "volterra_impl.hpp"
