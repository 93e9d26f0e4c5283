#include <doctest.h>

#include <cmath>

#include "csturm/error.hpp"
#include "csturm/weyl.hpp"
#include "oracles.hpp"

using namespace csturm;

namespace {

Potential half_line(const std::string& src, double a = 0.0) {
  return probed(parse_potential(src, Interval(a, kInf)));
}

// ∫_0^d |cos(k x)|^2 with k = sqrt(i)
double cos_norm(double d) {
  cd k = std::sqrt(cd(0, 1));
  double a = k.real(), b = k.imag();
  return std::sinh(2 * b * d) / (4 * b) + std::sin(2 * a * d) / (4 * a);
}

// (m u + v) with u = (1,0), v = (0,-1) at 0
SolutionTrajectory combination(const Potential& p, cd lambda, cd m, double d) {
  return solve_ivp(p, lambda, p.interval().a, m, -1.0, {}, {p.interval().a, d});
}

}  // namespace

TEST_CASE("disks for V = 0 at lambda = i") {
  Potential z = half_line("0");
  const cd lambda(0, 1);
  // extended-precision references
  const double radius[3] = {0.483850317327579463, 0.161847604994266236, 0.0417211252059739033};
  const cd center[3] = {{0.489230699432655513, 0.564684105630117144},
                        {0.763947427997348969, 0.609971584230327314},
                        {0.735450313548933616, 0.716564751524870687}};
  WeylDisk prev;
  for (int j = 0; j < 3; ++j) {
    double d = j + 1.0;
    WeylDisk w = weyl_disk(z, lambda, d);
    CHECK(w.d == d);
    CHECK(std::abs(w.radius - radius[j]) < 1e-10);
    CHECK(std::abs(w.center - center[j]) < 1e-10);
    CHECK(std::abs(w.radius - 1.0 / (2.0 * cos_norm(d))) < 1e-10);
    CHECK(std::abs(w.radius - 1.0 / (2.0 * w.u_norm_sq)) < 1e-15);
    CHECK(std::abs(w.radius_from_coefficients() - w.radius) < 1e-8 * w.radius);
    if (j > 0) {
      CHECK(w.radius < prev.radius);
      CHECK(std::abs(w.center - prev.center) + w.radius < prev.radius);
    }
    prev = w;
  }
}

TEST_CASE("points on the circle have real boundary data and norm Im m") {
  csturm::Rng rng(73);
  for (const char* src : {"0", "-i*x", "x^2 - 0.5i"}) {
    Potential p = half_line(src);
    const cd lambda(0.3, 1.0);
    const double d = 2.5;
    WeylDisk w = weyl_disk(p, lambda, d);
    for (int k = 0; k < 8; ++k) {
      cd m = w.center + std::polar(w.radius, rng.uniform(0.0, 2 * M_PI));
      auto f = combination(p, lambda, m, d);
      State<2> e = f.eval(d);
      CHECK(std::abs((std::conj(e[0]) * e[1]).imag()) < 1e-8 * (1.0 + std::norm(e[0]) + std::norm(e[1])));
      CHECK(std::abs(weighted_norm(f, p, lambda, d) - m.imag()) < 1e-6 * (1.0 + std::abs(m.imag())));
    }
    // inside the disk the truncated norms stay below Im m
    auto c = combination(p, lambda, w.center, d);
    for (double t : {0.5, 1.5, 2.5}) CHECK(weighted_norm(c, p, lambda, t) <= w.center.imag() + 1e-10);
  }
}

TEST_CASE("weighted norm basics") {
  Potential z = half_line("0");
  auto f = solve_ivp(z, cd(0, 1), 0.0, 1.0, 0.0, {}, {0.0, 2.0});
  double plain = integrate([&](double x) { return std::norm(f.f(x)); }, 0.0, 2.0).value;
  CHECK(weighted_norm(f, z, cd(0, 1), 2.0) == doctest::Approx(plain).epsilon(1e-10));
  auto zero = solve_ivp(z, cd(0, 1), 0.0, 0.0, 0.0, {}, {0.0, 2.0});
  CHECK(weighted_norm(zero, z, cd(0, 1), 2.0) == 0.0);
  Potential up = half_line("i");
  CHECK_THROWS_AS(weighted_norm(f, up, cd(0, 0.5), 2.0), DomainError);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(weyl_disk(half_line("0"), cd(1, 0), 1.0), DomainError);
  CHECK_THROWS_AS(weyl_disk(half_line("0"), cd(1, -1), 1.0), DomainError);
  CHECK_THROWS_AS(weyl_disk(probed(parse_potential("1/x^2", Interval(0, kInf))), cd(0, 1), 1.0), DomainError);
  auto [u, v] = weyl_pair(half_line("x"), cd(0, 1), 2.0);
  CHECK(std::abs(wronskian(v, u, 1.3) - 1.0) < 1e-8);
}

TEST_CASE("trichotomy: free particle is limit point with one square-integrable solution") {
  auto r = trichotomy(half_line("0"), cd(0, 1));
  CHECK(r.kind == WeylCase::limit_point_one_L2);
  CHECK(r.final_radius < 1e-8);
  CHECK(r.nesting_ok);
  CHECK(r.trace.size() >= 5);
  for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k].u_norm_sq > r.trace[k - 1].u_norm_sq);
  CHECK(r.dim.dim == 1);
}

TEST_CASE("trichotomy: -x^4 is limit circle") {
  auto r = trichotomy(half_line("-x^4"), cd(0, 1));
  CHECK(r.kind == WeylCase::limit_circle);
  CHECK(r.radius_stabilized);
  CHECK(r.limit_radius_estimate > 1e-4);
  CHECK(std::abs(r.limit_radius_estimate - 0.15777) < 1e-4);
  CHECK(r.nesting_ok);
  CHECK(r.dim.dim == 2);
}
