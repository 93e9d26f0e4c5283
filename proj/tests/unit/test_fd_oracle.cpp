#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "csturm/error.hpp"
#include "csturm/fd_oracle.hpp"

using namespace csturm;

namespace {

Potential pot(const std::string& src, double a, double b) { return probed(parse_potential(src, Interval(a, b))); }

BoundarySpec bc(cd a0, cd a1, cd b0, cd b1) {
  return {BoundaryFunctional::regular(Endpoint::a, a0, a1), BoundaryFunctional::regular(Endpoint::b, b0, b1)};
}

}  // namespace

TEST_CASE("free Dirichlet eigenvalues") {
  Realization r(pot("0", 0.0, M_PI), bc(0, 1, 0, 1));
  FDMatrix m = fd_oracle_build(r, 100);
  CHECK(m.size() == 99);
  auto ev = fd_eigenvalues(m);
  const double h = M_PI / 100;
  // discrete eigenvalues 4/h^2 sin^2(k h/2)
  for (int k = 1; k <= 3; ++k) {
    double exact = 4.0 / (h * h) * std::pow(std::sin(k * h / 2), 2);
    CHECK(std::abs(ev[k - 1] - exact) < 1e-10 * exact);
  }
  CHECK(std::abs(ev[0] - 1.0) < h * h);
  CHECK_THROWS_AS(fd_oracle_build(r, 7), DomainError);
}

TEST_CASE("refinement converges to the dense eigenvalue") {
  Realization r(pot("x^2 + 3i*x", 0.0, 1.0), bc(1, cd(0.5, 0.5), 0, 1));
  FDMatrix m = fd_oracle_build(r, 200);
  auto ev = fd_eigenvalues(m);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(fd_refine(m, ev[k] + cd(0.3, -0.2)) - ev[k]) < 1e-10 * std::abs(ev[k]));
}

TEST_CASE("resolvent solve converges at second order") {
  Realization r(pot("0", 0.0, 1.0), bc(0, 1, 0, 1));
  double err[2];
  for (int j = 0; j < 2; ++j) {
    FDMatrix m = fd_oracle_build(r, 50 << j);
    std::vector<cd> g;
    for (double x : m.x) g.push_back(std::sin(M_PI * x));
    auto f = fd_solve(m, 0.0, g);
    double e = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) e = std::max(e, std::abs(f[i] - std::sin(M_PI * m.x[i]) / (M_PI * M_PI)));
    err[j] = e;
  }
  CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.01));
  FDMatrix m = fd_oracle_build(r, 50);
  CHECK_THROWS_AS(fd_solve(m, 0.0, {1.0}), UsageError);
}

TEST_CASE("weighted symmetry and Hermitian structure") {
  Realization r(pot("x^2", 0.0, 1.0), bc(1, 2, 1, -0.5));
  FDMatrix m = fd_oracle_build(r, 40);
  Eigen::MatrixXcd a = m.dense();
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(m.w.data(), static_cast<Eigen::Index>(m.w.size()));
  Eigen::MatrixXcd wa = w.asDiagonal() * a;
  CHECK((wa - wa.transpose()).norm() < 1e-10 * wa.norm());
  CHECK((wa - wa.adjoint()).norm() < 1e-10 * wa.norm());
  for (cd l : fd_eigenvalues(m)) CHECK(std::abs(l.imag()) < 1e-8 * (1.0 + std::abs(l)));
  // complex potential: still complex symmetric
  Realization c(pot("x^2 - 4i", 0.0, 1.0), bc(1, cd(0, 1), 0, 1));
  FDMatrix mc = fd_oracle_build(c, 40);
  Eigen::MatrixXcd wc = w.head(static_cast<Eigen::Index>(mc.size())).asDiagonal() * mc.dense();
  CHECK(mc.size() == 40);
  CHECK((wc - wc.transpose()).norm() < 1e-10 * wc.norm());
}

TEST_CASE("numerical range") {
  Realization sa(pot("x^2", 0.0, 1.0), bc(1, 2, 0, 1));
  for (cd z : fd_numerical_range(fd_oracle_build(sa, 200), 200, 0)) CHECK(std::abs(z.imag()) < 1e-10 * (1 + std::abs(z)));

  Realization shift(pot("-i", 0.0, 1.0), bc(1, 0, 1, 0));
  for (cd z : fd_numerical_range(fd_oracle_build(shift, 200), 200, 1)) CHECK(std::abs(z.imag() + 1.0) < 1e-10);

  Realization diss(pot("-i*x^2", 0.0, 1.0), bc(1, cd(0, -1), 1, cd(0, 1)));
  auto nr = fd_numerical_range(fd_oracle_build(diss, 400), 200, 2);
  CHECK(nr.size() == 200);
  for (cd z : nr) CHECK(z.imag() <= 1e-10);

  Realization bad(pot("0", 0.0, 1.0), bc(1, cd(0, 1), 0, 1));
  auto nb = fd_numerical_range(fd_oracle_build(bad, 400), 200, 3);
  CHECK(std::any_of(nb.begin(), nb.end(), [](cd z) { return z.imag() > 0.0; }));

  // identical seeds give identical samples
  auto a = fd_numerical_range(fd_oracle_build(diss, 100), 20, 9), b = fd_numerical_range(fd_oracle_build(diss, 100), 20, 9);
  CHECK(a == b);
}

TEST_CASE("truncated ends use flagged Dirichlet proxies") {
  Realization r(pot("x^2", -kInf, kInf), BoundarySpec{});
  FDMatrix m = fd_oracle_build(r, 400);
  CHECK(m.proxy_a);
  CHECK(m.proxy_b);
  auto ev = fd_richardson(r, 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(ev.extrapolated[k] - (2.0 * k + 1.0)) < 1e-6);
  CHECK(ev.raw.size() == 3);
  CHECK(ev.ns == std::vector<std::size_t>{200, 400, 800});
  CHECK_THROWS_AS(fd_richardson(r, 3, {100, 200}), UsageError);
}

TEST_CASE("trajectory functionals at regular ends become boundary rows") {
  Potential p = pot("x", 0.0, 1.0);
  auto g = solve_ivp(p, 0.0, 0.0, 1.0, 2.0, {}, {0.0, 1.0});
  Realization traj(p, {BoundaryFunctional::trajectory(Endpoint::a, g), BoundaryFunctional::regular(Endpoint::b, 0, 1)});
  Realization vec(p, bc(1, 2, 0, 1));
  auto e1 = fd_eigenvalues(fd_oracle_build(traj, 50)), e2 = fd_eigenvalues(fd_oracle_build(vec, 50));
  CHECK(std::abs(e1[0] - e2[0]) < 1e-12);
}
