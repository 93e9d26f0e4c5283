#include "csturm/quadrature.hpp"

#include <numbers>

namespace csturm {

GaussLegendre gauss_legendre(int m) {
  GaussLegendre g;
  g.nodes.resize(static_cast<std::size_t>(m));
  g.weights.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= m; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = m * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // ascending order
    g.nodes[static_cast<std::size_t>(m - 1 - i)] = z;
    g.weights[static_cast<std::size_t>(m - 1 - i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return g;
}

}  // namespace csturm
