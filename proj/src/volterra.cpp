#include "volterra.hpp"

namespace csturm::detail {

namespace {

double lagrange_basis(const std::vector<double>& nodes, std::size_t l, double t) {
  double v = 1.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (j != l) v *= (t - nodes[j]) / (nodes[l] - nodes[j]);
  }
  return v;
}

}  // namespace

VolterraPanels::VolterraPanels(std::vector<double> edges, int m)
    : edges_(std::move(edges)), m_(m), gl_(gauss_legendre(m)) {
  const std::size_t mm = static_cast<std::size_t>(m);
  // a0[i][l] = ∫_{-1}^{t_i} L_l, a1[i][l] = ∫_{-1}^{t_i} (t+1) L_l
  a0_.assign(mm * mm, 0.0);
  a1_.assign(mm * mm, 0.0);
  for (std::size_t i = 0; i < mm; ++i) {
    double ti = gl_.nodes[i];
    double half = 0.5 * (ti + 1.0), mid = 0.5 * (ti - 1.0);
    for (std::size_t k = 0; k < mm; ++k) {
      double t = mid + half * gl_.nodes[k];
      double w = half * gl_.weights[k];
      for (std::size_t l = 0; l < mm; ++l) {
        double L = lagrange_basis(gl_.nodes, l, t);
        a0_[i * mm + l] += w * L;
        a1_[i * mm + l] += w * (t + 1.0) * L;
      }
    }
  }
  for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
    double c = 0.5 * (edges_[p] + edges_[p + 1]), hh = 0.5 * (edges_[p + 1] - edges_[p]);
    for (std::size_t j = 0; j < mm; ++j) x_.push_back(c + hh * gl_.nodes[j]);
  }
}

void VolterraPanels::apply(const std::vector<cd>& h, std::vector<cd>& I0, std::vector<cd>& I1, cd& I0_end,
                           cd& I1_end) const {
  const std::size_t mm = static_cast<std::size_t>(m_);
  const double s = edges_.front();
  // running totals over full panels: S0 = ∫_s^e h, S1 = ∫_s^e (y - s) h
  cd S0 = 0.0, S1 = 0.0;
  for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
    const double e = edges_[p];
    const double hh = 0.5 * (edges_[p + 1] - edges_[p]);  // signed
    const double es = e - s;
    const cd* hp = h.data() + p * mm;
    for (std::size_t i = 0; i < mm; ++i) {
      // partial integrals over [e, x_i]: ∫ h and ∫ (y - e) h
      cd p0 = 0.0, p1 = 0.0;
      for (std::size_t l = 0; l < mm; ++l) {
        p0 += a0_[i * mm + l] * hp[l];
        p1 += a1_[i * mm + l] * hp[l];
      }
      p0 *= hh;
      p1 *= hh * hh;
      const double xi = x_[p * mm + i] - s;
      cd total0 = S0 + p0;
      cd total1 = S1 + p1 + es * p0;  // ∫_s^{x_i} (y - s) h
      I0[p * mm + i] = total0;
      I1[p * mm + i] = xi * total0 - total1;
    }
    cd f0 = 0.0, f1 = 0.0;
    for (std::size_t l = 0; l < mm; ++l) {
      double w = gl_.weights[l] * hh;
      f0 += w * hp[l];
      f1 += w * (gl_.nodes[l] + 1.0) * hh * hp[l];
    }
    S1 += f1 + es * f0;
    S0 += f0;
  }
  I0_end = S0;
  I1_end = (edges_.back() - s) * S0 - S1;
}

}  // namespace csturm::detail
