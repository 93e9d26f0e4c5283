#pragma once

#include <optional>
#include <vector>

#include "csturm/boundary.hpp"
#include "csturm/greens.hpp"

namespace csturm {

struct RealizationOptions {
  // Truncation points used for ends that carry no condition (boundary index 0):
  // the decaying solution is selected there. Defaults: anchor ± 10·max(1,|anchor|)
  // at an infinite end, 10⁻⁴ of the anchor distance from a finite one.
  std::optional<double> cutoff_a, cutoff_b;
  std::optional<double> match;  // matching point, default the interval anchor
};

// L_{φ,ψ}: potential plus separated boundary conditions.
class Realization {
public:
  Realization(Potential p, BoundarySpec spec, RealizationOptions opt = {});

  const Potential& potential() const { return p_; }
  const BoundarySpec& spec() const { return spec_; }
  double match() const { return match_; }
  // Truncation point at an end without condition, else the endpoint.
  double end(Endpoint e) const { return e == Endpoint::a ? end_a_ : end_b_; }
  bool truncated(Endpoint e) const;
  Realization with_cutoffs_scaled(double factor) const;

private:
  Potential p_;
  BoundarySpec spec_;
  RealizationOptions opt_;
  double match_;
  double end_a_, end_b_;
};

struct CharValue {
  cd w;     // W(v_λ, u_λ) at the matching point
  cd dw;    // dW/dλ from the variational equations
};

CharValue characteristic(const Realization& r, cd lambda);
cd characteristic_wronskian(const Realization& r, cd lambda);

struct Region {
  double re0, re1, im0, im1;
};

struct FindOptions {
  std::size_t max_roots = 64;
  std::size_t max_evals = 40000;
  int min_edge_samples = 8;
  double newton_tol = 1e-13;
};

struct Eigenvalue {
  cd lambda;
  double residual = 0.0;       // |W(λ)|
  int multiplicity = 1;
  bool converged = true;       // residual < 1e-8 · scale
  double cutoff_shift = 0.0;   // |λ(cutoffs doubled) - λ| for truncated ends
};

struct FindResult {
  std::vector<Eigenvalue> roots;
  double scale = 0.0;  // max |W| over the contour samples of the region
  std::size_t evaluations = 0;
};

FindResult find_eigenvalues(const Realization& r, const Region& region, const FindOptions& opt = {});

// Two-sided kernel (L_• - λ)^{-1} built from the shooting solutions.
GreensKernel resolvent_kernel(const Realization& r, cd lambda);

}  // namespace csturm
