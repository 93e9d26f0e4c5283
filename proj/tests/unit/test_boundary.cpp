#include <doctest.h>

#include <cmath>

#include "csturm/boundary.hpp"
#include "csturm/error.hpp"
#include "oracles.hpp"

using namespace csturm;

namespace {

Potential pot(const std::string& src, double a, double b) { return probed(parse_potential(src, Interval(a, b))); }

}  // namespace

TEST_CASE("Wronskian limits at endpoints") {
  Potential z = pot("0", 0.0, kInf);
  // decaying exp(i sqrt(lambda) x) at two different lambdas
  auto decaying = [&](cd lambda) {
    cd k = cd(0, 1) * std::sqrt(lambda);
    // shoot backward from the far end, where the decaying mode is stable
    return solve_ivp(z, lambda, 60.0, std::exp(60.0 * k), k * std::exp(60.0 * k), {}, {1.0, 60.0});
  };
  auto f = decaying(cd(0, 1)), g = decaying(cd(0, 2));
  auto lim = wronskian_at_endpoint(f, g, Endpoint::b);
  CHECK(std::abs(lim.value) < 1e-10);
  CHECK_FALSE(lim.exact);
  CHECK(std::abs(wronskian_at_endpoint(f, f, Endpoint::b).value) < 1e-12);

  Potential r = pot("x", 0.0, 1.0);
  auto u = solve_ivp(r, 1.0, 0.0, 2.0, 3.0, {}, {0.0, 1.0});
  auto v = solve_ivp(r, cd(0, 1), 0.0, -1.0, 0.5, {}, {0.0, 1.0});
  auto wa = wronskian_at_endpoint(u, v, Endpoint::a);
  CHECK(wa.exact);
  CHECK(std::abs(wa.value - (2.0 * 0.5 - 3.0 * -1.0)) < 1e-14);

  auto c1 = solve_ivp(z, 1.0, 1.0, 1.0, 0.0, {}, {1.0, 200.0});
  auto c2 = solve_ivp(z, 4.0, 1.0, 1.0, 0.0, {}, {1.0, 200.0});
  CHECK_THROWS_AS(wronskian_at_endpoint(c1, c2, Endpoint::b), IndeterminateError);
}

TEST_CASE("dim_U examples") {
  CHECK(dim_U(pot("0", 0.0, kInf), Endpoint::b) == 1);
  CHECK(dim_U(pot("0", 0.0, kInf), Endpoint::a) == 2);
  CHECK(dim_U(pot("-x^4", 0.0, kInf), Endpoint::b) == 2);
  auto r = dim_U_report(pot("0", 0.0, 1.0), Endpoint::a);
  CHECK(r.dim == 2);
  CHECK(r.method == "regular");
  auto t = dim_U_report(pot("x^2", 0.0, kInf), Endpoint::b);
  CHECK(t.dim == 1);
  CHECK(t.method == "tails");
  CHECK_FALSE(t.evidence.empty());
}

TEST_CASE("boundary index examples") {
  CHECK(boundary_index(pot("0", 0.0, 1.0), Endpoint::a) == 2);
  CHECK(boundary_index(pot("1/x", 0.0, 1.0), Endpoint::a) == 2);
  CHECK(boundary_index(pot("0", 0.0, kInf), Endpoint::b) == 0);
  CHECK(boundary_index(pot("sin(x)", 0.0, kInf), Endpoint::b) == 0);
  CHECK(boundary_index(pot("-x^4", 0.0, kInf), Endpoint::b, true) == 2);
}

TEST_CASE("classification report and dichotomy") {
  auto c = classify(pot("0", 0.0, kInf));
  CHECK(c.nu_a == 2);
  CHECK(c.nu_b == 0);
  CHECK(c.dim_Ua == 2);
  CHECK(c.dim_Ub == 1);
  CHECK(c.lambda == cd(0, 1));
  for (const char* src : {"0", "x^2", "-x^4", "sin(x)", "1"}) {
    Potential p = pot(src, 1.0, kInf);
    int nu = boundary_index(p, Endpoint::b);
    INFO(src);
    CHECK((nu == 0 || nu == 2));
    int d1 = dim_U(p, Endpoint::b, cd(0, 1)), d2 = dim_U(p, Endpoint::b, cd(1, 1));
    if (d1 == 2 || d2 == 2) CHECK(d1 == d2);
    // real potentials: nu = 0 exactly when one solution is square integrable at lambda = i
    CHECK((nu == 0) == (d1 == 1));
  }
}

TEST_CASE("symplectic form") {
  auto e1 = BoundaryFunctional::regular(Endpoint::a, 1.0, 0.0);
  auto e2 = BoundaryFunctional::regular(Endpoint::a, 0.0, 1.0);
  CHECK(symplectic_form(e1, e2) == cd(1.0));
  CHECK(symplectic_form(e2, e1) == cd(-1.0));
  CHECK(symplectic_form(e1, e1) == cd(0.0));
  CHECK_THROWS_AS(symplectic_form(e1, BoundaryFunctional::regular(Endpoint::b, 1.0, 0.0)), DomainError);

  // representatives with the same boundary data but different equations
  Potential p = pot("x^2 + i", 0.0, 1.0);
  const cd a0(1.0, 2.0), a1(-0.5, 0.3), b0(0.2, -1.0), b1(2.0, 0.0);
  auto f1 = solve_ivp(p, 0.0, 0.0, a0, a1, {}, {0.0, 1.0});
  auto g1 = solve_ivp(p, 0.0, 0.0, b0, b1, {}, {0.0, 1.0});
  auto f2 = solve_ivp(p, cd(0, 1), 0.0, a0, a1, {}, {0.0, 1.0});
  auto g2 = solve_ivp(p, 2.0, 0.0, b0, b1, {}, {0.0, 1.0});
  cd s1 = symplectic_form(BoundaryFunctional::trajectory(Endpoint::a, f1), BoundaryFunctional::trajectory(Endpoint::a, g1));
  cd s2 = symplectic_form(BoundaryFunctional::trajectory(Endpoint::a, f2), BoundaryFunctional::trajectory(Endpoint::a, g2));
  CHECK(std::abs(s1 - s2) < 1e-8);
  CHECK(std::abs(s1 - (a0 * b1 - a1 * b0)) < 1e-12);
  cd mixed = symplectic_form(BoundaryFunctional::regular(Endpoint::a, a0, a1), BoundaryFunctional::trajectory(Endpoint::a, g2));
  CHECK(std::abs(mixed - s1) < 1e-12);
}

TEST_CASE("boundary functional applies as a Wronskian") {
  Potential p = pot("x", 0.0, 1.0);
  auto f = solve_ivp(p, 1.0, 0.0, 2.0, 5.0, {}, {0.0, 1.0});
  // α0 f'(a) - α1 f(a)
  CHECK(std::abs(BoundaryFunctional::regular(Endpoint::a, 1.0, 3.0).apply(f) - (5.0 - 6.0)) < 1e-14);
  auto g = solve_ivp(p, 0.0, 1.0, 1.0, 0.0, {}, {0.0, 1.0});
  CHECK(std::abs(BoundaryFunctional::trajectory(Endpoint::b, g).apply(f) - wronskian(g, f, 1.0)) < 1e-14);
}

TEST_CASE("Kodaira functional identity") {
  csturm::Rng rng(67);
  Potential p = pot(oracle::random_polynomial(rng, 3), 0.0, 1.0);
  auto rand_sol = [&]() { return solve_ivp(p, rng.disk(), 0.5, rng.cnormal(), rng.cnormal(), {}, {0.0, 1.0}); };
  auto f = rand_sol(), g = rand_sol(), h = rand_sol();
  auto F = BoundaryFunctional::trajectory(Endpoint::a, f), G = BoundaryFunctional::trajectory(Endpoint::a, g),
       H = BoundaryFunctional::trajectory(Endpoint::a, h);
  const cd c = 1.0 / symplectic_form(G, F);
  const cd wgh = symplectic_form(G, H), whf = symplectic_form(H, F);
  for (int k = 0; k < 10; ++k) {
    auto t = rand_sol();
    cd lhs = H.apply(t), rhs = c * wgh * F.apply(t) + c * whf * G.apply(t);
    CHECK(std::abs(lhs - rhs) < 1e-8 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("dissipativity certificate examples") {
  BoundarySpec dir{BoundaryFunctional::regular(Endpoint::a, 0.0, 1.0), BoundaryFunctional::regular(Endpoint::b, 0.0, 1.0)};
  auto r = dissipativity_certificate(pot("-x^2", 0.0, 1.0), dir);
  CHECK(r.certified);
  CHECK(*r.q_a == 0.0);

  BoundarySpec bad{BoundaryFunctional::regular(Endpoint::a, 1.0, cd(0, 1)), BoundaryFunctional::regular(Endpoint::b, 0.0, 1.0)};
  auto s = dissipativity_certificate(pot("-x^2", 0.0, 1.0), bad);
  CHECK_FALSE(s.certified);
  CHECK(*s.q_a == 1.0);

  BoundarySpec neu{BoundaryFunctional::regular(Endpoint::a, 1.0, 0.0), BoundaryFunctional::regular(Endpoint::b, 1.0, 0.0)};
  CHECK(dissipativity_certificate(pot("-i", 0.0, 1.0), neu).certified);
  CHECK_FALSE(dissipativity_certificate(pot("i*x", 0.0, 1.0), neu).certified);

  BoundarySpec bside{BoundaryFunctional::regular(Endpoint::a, 0.0, 1.0), BoundaryFunctional::regular(Endpoint::b, 1.0, cd(0, -1))};
  CHECK_FALSE(dissipativity_certificate(pot("0", 0.0, 1.0), bside).certified);

  // no condition at an end with boundary index 0 is fine
  BoundarySpec half{BoundaryFunctional::regular(Endpoint::a, 0.0, 1.0), std::nullopt};
  CHECK(dissipativity_certificate(pot("-i", 0.0, kInf), half).certified);
  BoundarySpec none{std::nullopt, std::nullopt};
  CHECK_FALSE(dissipativity_certificate(pot("-i", 0.0, kInf), none).certified);
}

TEST_CASE("Green's identity residual") {
  Potential z = pot("0", 0.0, 1.0);
  // f = x^2 has -f'' = -2, g = x^3 has -g'' = -6x
  auto f = solve_ivp(z, 0.0, 0.0, 0.0, 0.0, [](double) { return cd(-2.0); }, {0.0, 1.0});
  auto g = solve_ivp(z, 0.0, 0.0, 0.0, 0.0, [](double x) { return cd(-6.0 * x); }, {0.0, 1.0});
  CHECK(std::abs(f.f(0.5) - 0.25) < 1e-14);
  CHECK(std::abs(greens_identity_residual(f, g)) < 1e-9);

  csturm::Rng rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    Potential p = pot(oracle::random_polynomial(rng, 3), 0.0, 1.0);
    auto a = solve_ivp(p, rng.disk() * 3.0, 0.5, rng.cnormal(), rng.cnormal(), {}, {0.0, 1.0});
    auto b = solve_ivp(p, rng.disk() * 3.0, 0.5, rng.cnormal(), rng.cnormal(), [](double x) { return cd(x, 1.0); },
                       {0.0, 1.0});
    CHECK(std::abs(greens_identity_residual(a, b)) < 1e-6);
  }
}
