#pragma once

#include <optional>

#include "csturm/ivp.hpp"
#include "csturm/quadrature.hpp"

namespace csturm {

enum class KernelKind { bisolution, two_sided, forward, backward, at_d };
const char* to_string(KernelKind k);
KernelKind kernel_kind_from_string(const std::string& s);

// Green's kernel over a pair of homogeneous solutions u, v. Evaluation uses
// v / W(v,u), so every kind is normalized to W(v,u) = 1.
class GreensKernel {
public:
  GreensKernel(KernelKind kind, SolutionTrajectory u, SolutionTrajectory v, cd normalization, double d);

  KernelKind kind() const { return kind_; }
  const SolutionTrajectory& u() const { return u_; }
  const SolutionTrajectory& v() const { return v_; }
  cd normalization() const { return w_; }  // W(v,u) before rescaling
  double d() const { return d_; }
  double lo() const { return std::max(u_.lo(), v_.lo()); }
  double hi() const { return std::min(u_.hi(), v_.hi()); }

  cd operator()(double x, double y) const;
  // ∂G/∂y
  cd dy(double x, double y) const;

  // Branch formulas of the case table, evaluated at (x, y) regardless of
  // the order of x and y: below = branch for y < x, above = branch for y > x.
  cd branch(double x, double y, bool below) const;
  cd branch_dy(double x, double y, bool below) const;

private:
  KernelKind kind_;
  SolutionTrajectory u_, v_;
  cd w_;
  cd c_;
  double d_;
};

// Degenerate pairs (|W(v,u)| < 1e-8 · |u||v|) raise DomainError.
GreensKernel build_kernel(KernelKind kind, const SolutionTrajectory& u, const SolutionTrajectory& v,
                          std::optional<double> d = std::nullopt);

cd kernel_eval(const GreensKernel& k, double x, double y);

// ∫ G(x,y) g(y) dy over the support of g, split at y = x (and y = d).
cd apply_kernel(const GreensKernel& k, const Rhs& g, Span support, double x, const QuadOptions& q = {});

enum class DifferenceIdentity {
  two_sided_minus_forward,   // G_{u,v} - G_→ = |u⟩⟨v|
  two_sided_minus_backward,  // G_{u,v} - G_← = |v⟩⟨u|
  forward_minus_backward,    // G_→ - G_← = G_↔
  two_sided_change_of_basis  // G_{u,v} - G_{u1,v1} = |u⟩⟨v| - |u1⟩⟨v1|
};

// Residual of one identity applied to g at probe x. (u1, v1) is only used
// by the change-of-basis identity.
cd difference_identity_residual(DifferenceIdentity id, const SolutionTrajectory& u, const SolutionTrajectory& v,
                                const Rhs& g, Span support, double x,
                                const SolutionTrajectory* u1 = nullptr, const SolutionTrajectory* v1 = nullptr,
                                const QuadOptions& q = {});

struct JumpDiagnostics {
  cd value_jump;       // G(x, x-0) - G(x, x+0)
  cd derivative_jump;  // ∂₂G(x, x-0) - ∂₂G(x, x+0)
};
JumpDiagnostics jump_diagnostics(const GreensKernel& k, double x);

}  // namespace csturm
