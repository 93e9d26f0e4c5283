#include <doctest.h>

#include <cmath>

#include "csturm/potential.hpp"
#include "csturm/tails.hpp"

using namespace csturm;

TEST_CASE("geometric decay is finite with extrapolated total") {
  TailSeries t;
  double total = 0.0;
  for (int k = 0; k < 12; ++k) {
    double inc = std::pow(0.5, k);
    total += inc;
    t.push(std::log(inc), k + 1.0);
  }
  CHECK(t.verdict() == TailVerdict::finite);
  CHECK(std::exp(t.log_total()) == doctest::Approx(total).epsilon(1e-14));
  CHECK(std::exp(t.log_extrapolated()) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(t.log10_partial_sums().back() == doctest::Approx(std::log10(total)));
}

TEST_CASE("growth is infinite") {
  TailSeries t;
  for (int k = 0; k < 20 && t.verdict() == TailVerdict::undecided; ++k) t.push(k * std::log(1.7), k + 1.0);
  CHECK(t.verdict() == TailVerdict::infinite);

  // constant increments: the flat-run rule
  TailSeries c;
  for (int k = 0; k < 20 && c.verdict() == TailVerdict::undecided; ++k) c.push(0.0, k + 1.0);
  CHECK(c.verdict() == TailVerdict::infinite);
}

TEST_CASE("start-up transient from a tiny first shell is not divergence") {
  TailSeries t;
  t.push(std::log(1e-30), 1.0);
  for (int k = 1; k < 16; ++k) t.push(std::log(std::pow(0.6, k)), k + 1.0);
  CHECK(t.verdict() == TailVerdict::finite);
}

TEST_CASE("too few shells stay undecided") {
  TailSeries t;
  for (int k = 0; k < 3; ++k) t.push(-k, k);
  CHECK(t.verdict() == TailVerdict::undecided);
  CHECK(t.size() == 3);
}

TEST_CASE("log_add") {
  CHECK(log_add(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
  CHECK(log_add(-TailSeries::kInfLog, 1.5) == 1.5);
  CHECK(log_add(800.0, 800.0) == doctest::Approx(800.0 + std::log(2.0)));
}

TEST_CASE("shell walks") {
  ShellWalk f(0.5, 0.0);
  CHECK(f[0] == 0.5);
  CHECK(f[1] == 0.25);
  CHECK(f[3] == 0.0625);
  CHECK(f.usable(30));
  CHECK_FALSE(f.usable(2000));

  ShellWalk g(2.0, kInf, 1.5);
  CHECK(g[1] == 3.0);
  CHECK(g[2] == 4.5);
  CHECK_FALSE(g.usable(5000));

  ShellWalk h(-1.0, -kInf, 2.0);
  CHECK(h[3] == -8.0);
}

TEST_CASE("log ray through exponential growth") {
  // y' = y on [0, 300]; ∫|y|^2 = (e^600 - 1)/2 overflows doubles
  OdeOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-300;
  LogRay<1> ray([](double, const State<1>& y, State<1>& dy) { dy[0] = y[0]; }, 0.0, State<1>{1.0}, {}, o);
  double s1 = ray.advance(100.0, [](double, const State<1>& y) { return std::norm(y[0]); });
  CHECK(s1 == doctest::Approx(200.0 - std::log(2.0)).epsilon(1e-9));
  double s2 = ray.advance(300.0, [](double, const State<1>& y) { return std::norm(y[0]); });
  CHECK(s2 == doctest::Approx(600.0 - std::log(2.0)).epsilon(1e-9));
  CHECK(ray.renormalizations() >= 1);
  CHECK(ray.x() == 300.0);
  CHECK(ray.log_scale() + std::log(std::abs(ray.state()[0])) == doctest::Approx(300.0).epsilon(1e-9));
  CHECK_THROWS_AS(LogRay<1>([](double, const State<1>&, State<1>& dy) { dy[0] = 0.0; }, 0.0, State<1>{0.0}, {}, o),
                  DomainError);
}
