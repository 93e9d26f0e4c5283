#include <doctest.h>

#include <cmath>

#include "csturm/error.hpp"
#include "csturm/greens.hpp"
#include "oracles.hpp"

using namespace csturm;

namespace {

Potential on01(const std::string& src) { return probed(parse_potential(src, Interval(0, 1))); }

SolutionTrajectory sol(const Potential& p, cd lambda, double d, cd p0, cd p1) {
  return solve_ivp(p, lambda, d, p0, p1, {}, {0.0, 1.0});
}

Rhs bump(double c, double w, cd amp) {
  return [=](double x) {
    double t = (x - c) / w;
    return std::abs(t) < 1.0 ? amp * std::pow(1.0 - t * t, 4) : cd(0.0);
  };
}

}  // namespace

TEST_CASE("closed-form kernels for V = 0") {
  Potential z = on01("0");
  auto u = sol(z, 0.0, 0.0, 0.0, 1.0);   // x
  auto v = sol(z, 0.0, 0.0, 1.0, -1.0);  // 1 - x
  auto ts = build_kernel(KernelKind::two_sided, u, v);
  CHECK(std::abs(ts.normalization() - 1.0) < 1e-14);
  CHECK(std::abs(kernel_eval(ts, 0.25, 0.5) - 0.125) < 1e-14);
  CHECK(std::abs(kernel_eval(ts, 0.3, 0.7) - 0.09) < 1e-14);
  CHECK(std::abs(kernel_eval(ts, 0.7, 0.3) - 0.09) < 1e-14);
  CHECK(std::abs(kernel_eval(ts, 0.4, 0.4) - 0.24) < 1e-14);

  auto one = sol(z, 0.0, 0.0, 1.0, 0.0);
  auto mx = sol(z, 0.0, 0.0, 0.0, -1.0);
  auto fw = build_kernel(KernelKind::forward, one, mx);
  CHECK(std::abs(kernel_eval(fw, 0.8, 0.3) - (0.3 - 0.8)) < 1e-14);
  CHECK(kernel_eval(fw, 0.3, 0.8) == cd(0.0));
  auto bw = build_kernel(KernelKind::backward, one, mx);
  CHECK(kernel_eval(bw, 0.8, 0.3) == cd(0.0));
  CHECK(std::abs(kernel_eval(bw, 0.3, 0.8) - (0.3 - 0.8)) < 1e-14);

  // basis x, 1 normalized to W(v,u) = 1: G(x,y) = y - x
  auto bi = build_kernel(KernelKind::bisolution, u, one);
  for (auto [x, y] : {std::pair{0.2, 0.9}, std::pair{0.7, 0.1}}) {
    CHECK(std::abs(kernel_eval(bi, x, y) - (y - x)) < 1e-14);
    CHECK(std::abs(kernel_eval(bi, x, y) + kernel_eval(bi, y, x)) < 1e-14);
  }
  CHECK_THROWS_AS(kernel_eval(ts, 0.5, 1.5), DomainError);
}

TEST_CASE("degenerate basis") {
  Potential z = on01("0");
  auto u = sol(z, 0.0, 0.0, 0.0, 1.0);
  CHECK_THROWS_AS(build_kernel(KernelKind::two_sided, u, u.scaled(cd(2.0, 1.0))), DomainError);
  CHECK_THROWS_AS(build_kernel(KernelKind::at_d, u, sol(z, 0.0, 0.0, 1.0, 0.0)), DomainError);
  CHECK(kernel_kind_from_string("at_d") == KernelKind::at_d);
  CHECK_THROWS(kernel_kind_from_string("sideways"));
}

TEST_CASE("apply_kernel examples") {
  Potential z = on01("0");
  auto u = sol(z, 0.0, 0.0, 0.0, 1.0);
  auto v = sol(z, 0.0, 0.0, 1.0, -1.0);
  auto ts = build_kernel(KernelKind::two_sided, u, v);
  Rhs one = [](double) { return cd(1.0); };
  for (double x : {0.1, 0.5, 0.83}) CHECK(std::abs(apply_kernel(ts, one, {0.0, 1.0}, x) - x * (1 - x) / 2) < 1e-12);
  Rhs zero = [](double) { return cd(0.0); };
  CHECK(apply_kernel(ts, zero, {0.0, 1.0}, 0.4) == cd(0.0));

  auto fw = build_kernel(KernelKind::forward, u, v);
  CHECK(apply_kernel(fw, bump(0.7, 0.1, 1.0), {0.6, 0.8}, 0.5) == cd(0.0));
  auto bw = build_kernel(KernelKind::backward, u, v);
  CHECK(apply_kernel(bw, bump(0.3, 0.1, 1.0), {0.2, 0.4}, 0.5) == cd(0.0));

  // at_d: f(d) = f'(d) = 0 and -f'' = 1 gives -(x-d)^2/2
  auto gd = build_kernel(KernelKind::at_d, u, v, 0.4);
  for (double x : {0.1, 0.4, 0.9}) CHECK(std::abs(apply_kernel(gd, one, {0.0, 1.0}, x) + 0.5 * (x - 0.4) * (x - 0.4)) < 1e-12);
}

TEST_CASE("at_d kernel agrees with the Neumann series") {
  Potential p = on01("3*x^2 - 2i*x");
  const double d = 0.45;
  Span w{0.2, 0.7};
  REQUIRE(neumann_contraction_bound(p, d, w) < 1.0);
  Rhs g = [](double x) { return cd(std::cos(4 * x), 1.0); };
  auto n = neumann_solve(p, d, g, w);
  auto gd = build_kernel(KernelKind::at_d, sol(p, 0.0, d, 1.0, 0.0), sol(p, 0.0, d, 0.0, 1.0), d);
  for (double x : {0.25, 0.45, 0.6}) CHECK(std::abs(apply_kernel(gd, g, w, x) - n.f(x)) < 1e-8);
}

TEST_CASE("Green property: (L - lambda) G g = g by second differences") {
  csturm::Rng rng(41);
  QuadOptions q;
  q.rel_tol = 1e-13;
  for (int trial = 0; trial < 4; ++trial) {
    Potential p = on01(oracle::random_polynomial(rng, 3));
    cd lambda = rng.disk() * 2.0;
    auto u = sol(p, lambda, 0.0, 0.0, 1.0);
    auto v = sol(p, lambda, 1.0, 0.0, -1.0);
    auto k = build_kernel(KernelKind::two_sided, u, v);
    for (int j = 0; j < 5; ++j) {
      double c = rng.uniform(0.3, 0.7);
      Rhs g = bump(c, 0.2, rng.cnormal());
      Span s{c - 0.2, c + 0.2};
      double x = rng.uniform(0.15, 0.85);
      const double h = 1e-2;
      auto f = [&](double t) { return apply_kernel(k, g, s, t, q); };
      cd lf = oracle::minus_second_difference(f, x, h) + (p(x) - lambda) * f(x);
      CHECK(std::abs(lf - g(x)) < 2e-3 * (1.0 + std::abs(g(c))));
    }
  }
}

TEST_CASE("jump diagnostics") {
  Potential z = on01("0");
  auto k = build_kernel(KernelKind::two_sided, sol(z, 0.0, 0.0, 0.0, 1.0), sol(z, 0.0, 1.0, 0.0, -1.0));
  for (double x : {0.5, 0.25}) {
    auto j = jump_diagnostics(k, x);
    CHECK(std::abs(j.value_jump) < 1e-8);
    CHECK(std::abs(j.derivative_jump - 1.0) < 1e-8);
  }
  CHECK_THROWS_AS(jump_diagnostics(k, 1.0), DomainError);

  csturm::Rng rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    Potential p = on01(oracle::random_polynomial(rng, 3));
    auto kr = build_kernel(KernelKind::two_sided, sol(p, 0.0, 0.0, 0.0, 1.0), sol(p, 0.0, 1.0, 0.0, 1.0));
    for (int j = 0; j < 5; ++j) {
      auto jd = jump_diagnostics(kr, rng.uniform(0.05, 0.95));
      CHECK(std::abs(jd.value_jump) < 1e-6);
      CHECK(std::abs(jd.derivative_jump - 1.0) < 1e-6);
    }
  }
}

TEST_CASE("difference identities") {
  Potential z = on01("0");
  auto u = sol(z, 0.0, 0.0, 0.0, 1.0);
  auto v = sol(z, 0.0, 1.0, 0.0, -1.0);
  Rhs one = [](double) { return cd(1.0); };
  for (auto id : {DifferenceIdentity::two_sided_minus_forward, DifferenceIdentity::two_sided_minus_backward,
                  DifferenceIdentity::forward_minus_backward}) {
    for (int j = 0; j < 10; ++j) {
      double x = 0.05 + 0.1 * j;
      CHECK(std::abs(difference_identity_residual(id, u, v, one, {0.0, 1.0}, x)) < 1e-8);
    }
    CHECK(difference_identity_residual(id, u, v, Rhs{}, {0.0, 1.0}, 0.5) == cd(0.0));
  }

  csturm::Rng rng(47);
  for (int trial = 0; trial < 3; ++trial) {
    Potential p = on01(oracle::random_polynomial(rng, 3));
    cd lambda = rng.disk();
    auto a = sol(p, lambda, 0.5, rng.cnormal(), rng.cnormal());
    auto b = sol(p, lambda, 0.5, rng.cnormal(), rng.cnormal());
    auto a1 = sol(p, lambda, 0.2, rng.cnormal(), rng.cnormal());
    auto b1 = sol(p, lambda, 0.8, rng.cnormal(), rng.cnormal());
    double c = rng.uniform(0.3, 0.7);
    Rhs g = bump(c, 0.25, rng.cnormal());
    Span s{c - 0.25, c + 0.25};
    double x = rng.uniform(0.1, 0.9);
    for (auto id : {DifferenceIdentity::two_sided_minus_forward, DifferenceIdentity::two_sided_minus_backward,
                    DifferenceIdentity::forward_minus_backward}) {
      CHECK(std::abs(difference_identity_residual(id, a, b, g, s, x)) < 1e-6);
    }
    CHECK(std::abs(difference_identity_residual(DifferenceIdentity::two_sided_change_of_basis, a, b, g, s, x, &a1,
                                                &b1)) < 1e-6);
  }
  CHECK_THROWS_AS(
      difference_identity_residual(DifferenceIdentity::two_sided_change_of_basis, u, v, one, {0.0, 1.0}, 0.5),
      DomainError);
}

TEST_CASE("basis independence of forward, backward, at_d and bisolution kernels") {
  csturm::Rng rng(53);
  Potential p = on01(oracle::random_polynomial(rng, 3));
  const cd lambda(0.4, -0.3);
  auto u1 = sol(p, lambda, 0.5, 1.0, 0.0), v1 = sol(p, lambda, 0.5, 0.0, 1.0);
  auto u2 = sol(p, lambda, 0.1, rng.cnormal(), rng.cnormal()), v2 = sol(p, lambda, 0.9, rng.cnormal(), rng.cnormal());
  for (auto kind : {KernelKind::forward, KernelKind::backward, KernelKind::at_d, KernelKind::bisolution}) {
    auto k1 = build_kernel(kind, u1, v1, 0.35), k2 = build_kernel(kind, u2, v2, 0.35);
    for (int j = 0; j < 20; ++j) {
      double x = rng.uniform(), y = rng.uniform();
      CHECK(std::abs(kernel_eval(k1, x, y) - kernel_eval(k2, x, y)) < 1e-8);
    }
  }
}

TEST_CASE("two-sided kernel is symmetric") {
  csturm::Rng rng(59);
  Potential p = on01(oracle::random_polynomial(rng, 2));
  auto k = build_kernel(KernelKind::two_sided, sol(p, 1.0, 0.0, 0.0, 1.0), sol(p, 1.0, 1.0, 1.0, 2.0));
  for (int j = 0; j < 20; ++j) {
    double x = rng.uniform(), y = rng.uniform();
    CHECK(std::abs(kernel_eval(k, x, y) - kernel_eval(k, y, x)) < 1e-14);
  }
}

TEST_CASE("forward kernel Hilbert-Schmidt bound") {
  csturm::Rng rng(61);
  Potential p = on01(oracle::random_polynomial(rng, 3));
  auto u = sol(p, 0.0, 0.5, rng.cnormal(), rng.cnormal()), v = sol(p, 0.0, 0.5, rng.cnormal(), rng.cnormal());
  auto k = build_kernel(KernelKind::forward, u, v);
  auto inner = [&](double x) {
    return integrate([&](double y) { return std::norm(kernel_eval(k, x, y)); }, 0.0, x).value;
  };
  double hs = integrate(inner, 0.0, 1.0).value;
  auto sq = [](const SolutionTrajectory& f) {
    return integrate([&](double x) { return std::norm(f.f(x)); }, 0.0, 1.0).value;
  };
  double bound = 2.0 * sq(u) * sq(v) / std::norm(k.normalization());
  CHECK(hs > 0.0);
  CHECK(hs <= bound);
}
