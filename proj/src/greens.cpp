#include "csturm/greens.hpp"

#include <algorithm>
#include <cmath>

#include "csturm/error.hpp"

namespace csturm {

const char* to_string(KernelKind k) {
  switch (k) {
    case KernelKind::bisolution: return "bisolution";
    case KernelKind::two_sided: return "two_sided";
    case KernelKind::forward: return "forward";
    case KernelKind::backward: return "backward";
    case KernelKind::at_d: return "at_d";
  }
  return "?";
}

KernelKind kernel_kind_from_string(const std::string& s) {
  for (KernelKind k : {KernelKind::bisolution, KernelKind::two_sided, KernelKind::forward, KernelKind::backward,
                       KernelKind::at_d}) {
    if (s == to_string(k)) return k;
  }
  throw UsageError("unknown kernel kind '" + s + "'");
}

GreensKernel::GreensKernel(KernelKind kind, SolutionTrajectory u, SolutionTrajectory v, cd normalization, double d)
    : kind_(kind), u_(std::move(u)), v_(std::move(v)), w_(normalization), c_(1.0 / normalization), d_(d) {}

cd GreensKernel::branch(double x, double y, bool below) const {
  auto ux = u_.f(x), vx = v_.f(x), uy = u_.f(y), vy = v_.f(y);
  switch (kind_) {
    case KernelKind::bisolution: return c_ * (vx * uy - ux * vy);
    case KernelKind::two_sided: return below ? c_ * vx * uy : c_ * ux * vy;
    case KernelKind::forward: return below ? c_ * (vx * uy - ux * vy) : cd(0.0, 0.0);
    case KernelKind::backward: return below ? cd(0.0, 0.0) : c_ * (ux * vy - vx * uy);
    case KernelKind::at_d:
      if (below) return y > d_ ? c_ * (vx * uy - ux * vy) : cd(0.0, 0.0);
      return y < d_ ? c_ * (ux * vy - vx * uy) : cd(0.0, 0.0);
  }
  return 0.0;
}

cd GreensKernel::branch_dy(double x, double y, bool below) const {
  auto ux = u_.f(x), vx = v_.f(x), uy = u_.df(y), vy = v_.df(y);
  switch (kind_) {
    case KernelKind::bisolution: return c_ * (vx * uy - ux * vy);
    case KernelKind::two_sided: return below ? c_ * vx * uy : c_ * ux * vy;
    case KernelKind::forward: return below ? c_ * (vx * uy - ux * vy) : cd(0.0, 0.0);
    case KernelKind::backward: return below ? cd(0.0, 0.0) : c_ * (ux * vy - vx * uy);
    case KernelKind::at_d:
      if (below) return y > d_ ? c_ * (vx * uy - ux * vy) : cd(0.0, 0.0);
      return y < d_ ? c_ * (ux * vy - vx * uy) : cd(0.0, 0.0);
  }
  return 0.0;
}

// At x = y all kinds are continuous, so either branch gives the value.
cd GreensKernel::operator()(double x, double y) const { return branch(x, y, y < x); }
cd GreensKernel::dy(double x, double y) const { return branch_dy(x, y, y < x); }

GreensKernel build_kernel(KernelKind kind, const SolutionTrajectory& u, const SolutionTrajectory& v,
                          std::optional<double> d) {
  if (!u.homogeneous() || !v.homogeneous()) throw DomainError("kernel solutions must be homogeneous");
  if (u.lambda() != v.lambda()) throw DomainError("kernel solutions must share the spectral parameter");
  double lo = std::max(u.lo(), v.lo()), hi = std::min(u.hi(), v.hi());
  if (!(lo < hi)) throw DomainError("kernel solutions have disjoint spans");
  if (kind == KernelKind::at_d) {
    if (!d || !(*d > lo && *d < hi)) throw DomainError("at_d kernel needs d inside the common span");
  }
  double xr = 0.5 * (lo + hi);
  auto yu = u.eval(xr), yv = v.eval(xr);
  cd w = wronskian(yv, yu);
  double scale = std::hypot(std::abs(yu[0]), std::abs(yu[1])) * std::hypot(std::abs(yv[0]), std::abs(yv[1]));
  if (!(std::abs(w) >= 1e-8 * scale) || scale == 0.0) {
    throw DomainError("degenerate basis: W(v,u) = " + format_double(std::abs(w)) + " relative to scale " +
                      format_double(scale));
  }
  return GreensKernel(kind, u, v, w, d.value_or(xr));
}

cd kernel_eval(const GreensKernel& k, double x, double y) {
  if (!(x >= k.lo() && x <= k.hi() && y >= k.lo() && y <= k.hi())) throw DomainError("kernel point out of span");
  return k(x, y);
}

cd apply_kernel(const GreensKernel& k, const Rhs& g, Span support, double x, const QuadOptions& q) {
  if (!g) return 0.0;
  if (!(support.lo >= k.lo() && support.hi <= k.hi())) throw DomainError("support of g outside kernel span");
  if (!(x >= k.lo() && x <= k.hi())) throw DomainError("probe outside kernel span");
  std::vector<double> cuts{x};
  if (k.kind() == KernelKind::at_d) cuts.push_back(k.d());
  const auto& bp = k.u().potential().breakpoints();
  cuts.insert(cuts.end(), bp.begin(), bp.end());
  auto integrand = [&](double y) { return k(x, y) * g(y); };
  return integrate(integrand, support.lo, support.hi, cuts, q).value;
}

namespace {

// ⟨a|g⟩ = ∫ a g over the support (bilinear, no conjugation)
cd pairing(const SolutionTrajectory& a, const Rhs& g, Span support, const QuadOptions& q) {
  auto integrand = [&](double y) { return a.f(y) * g(y); };
  return integrate(integrand, support.lo, support.hi, a.potential().breakpoints(), q).value;
}

}  // namespace

cd difference_identity_residual(DifferenceIdentity id, const SolutionTrajectory& u, const SolutionTrajectory& v,
                                const Rhs& g, Span support, double x, const SolutionTrajectory* u1,
                                const SolutionTrajectory* v1, const QuadOptions& q) {
  if (!g) return 0.0;
  auto ts = build_kernel(KernelKind::two_sided, u, v);
  const cd c = 1.0 / ts.normalization();  // v enters every kernel as v / W(v,u)
  switch (id) {
    case DifferenceIdentity::two_sided_minus_forward: {
      auto fw = build_kernel(KernelKind::forward, u, v);
      return apply_kernel(ts, g, support, x, q) - apply_kernel(fw, g, support, x, q) -
             u.f(x) * c * pairing(v, g, support, q);
    }
    case DifferenceIdentity::two_sided_minus_backward: {
      auto bw = build_kernel(KernelKind::backward, u, v);
      return apply_kernel(ts, g, support, x, q) - apply_kernel(bw, g, support, x, q) -
             c * v.f(x) * pairing(u, g, support, q);
    }
    case DifferenceIdentity::forward_minus_backward: {
      auto fw = build_kernel(KernelKind::forward, u, v);
      auto bw = build_kernel(KernelKind::backward, u, v);
      auto bi = build_kernel(KernelKind::bisolution, u, v);
      return apply_kernel(fw, g, support, x, q) - apply_kernel(bw, g, support, x, q) -
             apply_kernel(bi, g, support, x, q);
    }
    case DifferenceIdentity::two_sided_change_of_basis: {
      if (!u1 || !v1) throw DomainError("change-of-basis identity needs a second pair");
      auto ts1 = build_kernel(KernelKind::two_sided, *u1, *v1);
      const cd c1 = 1.0 / ts1.normalization();
      return apply_kernel(ts, g, support, x, q) - apply_kernel(ts1, g, support, x, q) -
             (u.f(x) * c * pairing(v, g, support, q) - u1->f(x) * c1 * pairing(*v1, g, support, q));
    }
  }
  return 0.0;
}

JumpDiagnostics jump_diagnostics(const GreensKernel& k, double x) {
  if (!(x > k.lo() && x < k.hi())) throw DomainError("jump probe must be strictly inside the kernel span");
  // y -> x-0 lies on the y < x branch, y -> x+0 on the y > x branch
  JumpDiagnostics j;
  j.value_jump = k.branch(x, x, true) - k.branch(x, x, false);
  j.derivative_jump = k.branch_dy(x, x, true) - k.branch_dy(x, x, false);
  return j;
}

}  // namespace csturm
