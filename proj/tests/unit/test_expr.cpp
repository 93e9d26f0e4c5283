#include <doctest.h>

#include <cmath>
#include <string>

#include "csturm/error.hpp"
#include "csturm/expr.hpp"
#include "csturm/rng.hpp"
#include "oracles.hpp"

using csturm::cd;
using csturm::Expr;
using csturm::ParseError;

namespace {

std::string random_source(csturm::Rng& rng, int depth) {
  const double u = rng.uniform();
  if (depth == 0 || u < 0.25) {
    switch (static_cast<int>(rng.uniform() * 5)) {
      case 0: return "x";
      case 1: return csturm::format_double(std::round(rng.uniform(-50, 50)) / 8.0);
      case 2: return csturm::format_double(rng.uniform(0.1, 3.0)) + "i";
      case 3: return "pi";
      default: return "(" + csturm::format_double(rng.uniform(-2, 2)) + "+0.5i)";
    }
  }
  const std::string a = random_source(rng, depth - 1), b = random_source(rng, depth - 1);
  switch (static_cast<int>(rng.uniform() * 10)) {
    case 0: return a + " + " + b;
    case 1: return a + " - " + b;
    case 2: return a + "*" + b;
    case 3: return "(" + a + ")/(2 + x*x)";
    case 4: return "-(" + a + ")";
    case 5: return "(" + a + ")^" + std::to_string(static_cast<int>(rng.uniform() * 4));
    case 6: return "sin(" + a + ") + cos(" + b + ")";
    case 7: return "exp(" + a + "/10)";
    case 8: return "abs(" + a + ") + sqrt(" + b + ")";
    default: return "piecewise(" + a + ", 0.3, " + b + ", 0.7, x)";
  }
}

bool same_bits(cd a, cd b) {
  auto eq = [](double p, double q) { return (std::isnan(p) && std::isnan(q)) || p == q; };
  return eq(a.real(), b.real()) && eq(a.imag(), b.imag());
}

}  // namespace

TEST_CASE("constants and arithmetic") {
  CHECK(Expr::parse("0").eval(0.3) == cd(0.0));
  CHECK(Expr::parse("2+3i").eval(0.0) == cd(2.0, 3.0));
  CHECK(Expr::parse("1.5i*x^2").eval(2.0) == cd(0.0, 6.0));
  CHECK(Expr::parse("x^6 - 1.5i*x^2").eval(2.0) == cd(64.0, -6.0));
  CHECK(Expr::parse("1/x^2").eval(0.5) == cd(4.0));
  CHECK(Expr::parse("x^-2").eval(0.5) == cd(4.0));
  CHECK(Expr::parse("x^(-2)").eval(0.5) == cd(4.0));
  CHECK(Expr::parse("-x^2").eval(3.0) == cd(-9.0));
  CHECK(Expr::parse("2*pi").eval(0.0).real() == doctest::Approx(2.0 * M_PI));
  CHECK(Expr::parse("  x  *  i ").eval(2.0) == cd(0.0, 2.0));
  CHECK(Expr::parse("1e-3*x").eval(2.0) == cd(2e-3));
}

TEST_CASE("functions evaluate on the principal branch") {
  CHECK(Expr::parse("sqrt(x)").eval(-4.0) == cd(0.0, 2.0));
  CHECK(std::abs(Expr::parse("exp(i*x)").eval(M_PI) + 1.0) < 1e-15);
  CHECK(std::abs(Expr::parse("log(x)").eval(-1.0) - cd(0.0, M_PI)) < 1e-15);
  CHECK(Expr::parse("abs(3+4i)").eval(0.0) == cd(5.0));
  CHECK(std::abs(Expr::parse("sin(x)^2 + cos(x)^2").eval(0.7) - 1.0) < 1e-15);
}

TEST_CASE("piecewise selects by half-open breakpoints") {
  Expr e = Expr::parse("piecewise(1, 2, x, 3, 5i)");
  CHECK(e.eval(1.9) == cd(1.0));
  CHECK(e.eval(2.0) == cd(2.0));
  CHECK(e.eval(2.5) == cd(2.5));
  CHECK(e.eval(3.0) == cd(0.0, 5.0));
  CHECK(e.breakpoints() == std::vector<double>{2.0, 3.0});
  CHECK(e.depends_on_x());
  CHECK_FALSE(Expr::parse("3 + pi*i").depends_on_x());
}

TEST_CASE("parse errors carry positions") {
  auto message = [](const char* src) -> std::string {
    try {
      Expr::parse(src);
    } catch (const ParseError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message("x^1.5").find("non-integer exponent in power") != std::string::npos);
  CHECK(message("x^y").find("non-integer exponent") != std::string::npos);
  CHECK(message("foo(x)").find("unknown identifier 'foo'") != std::string::npos);
  CHECK(message("(x+1").find("expected ')'") != std::string::npos);
  CHECK(message("x $ 2").find("unexpected character") != std::string::npos);
  CHECK(message("piecewise(0, 2, 1, 1, 3)").find("strictly increasing") != std::string::npos);
  CHECK(message("piecewise(0, x, 1)").find("breakpoint must be") != std::string::npos);
  CHECK(message("").find("unexpected end of input") != std::string::npos);
  try {
    Expr::parse("1 + @");
    FAIL("no throw");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("unparse round trip reproduces tree and values exactly") {
  csturm::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string src = random_source(rng, 4);
    Expr e = Expr::parse(src);
    Expr back = Expr::parse(e.unparse());
    INFO(src);
    INFO(e.unparse());
    CHECK(back == e);
    CHECK(back.unparse() == e.unparse());
    bool all = true;
    for (int k = 0; k < 100; ++k) {
      double x = rng.uniform(0.0, 1.0);
      all = all && same_bits(back.eval(x), e.eval(x));
    }
    CHECK(all);
  }
}

TEST_CASE("random polynomial sources parse to their coefficients") {
  csturm::Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = oracle::random_coefficients(rng, 4);
    Expr e = Expr::parse(oracle::polynomial_source(c));
    for (double x : {0.0, 0.3, 0.9}) {
      cd ref = 0.0;
      for (std::size_t k = c.size(); k-- > 0;) ref = ref * x + c[k];
      CHECK(std::abs(e.eval(x) - ref) < 1e-14);
    }
  }
}

TEST_CASE("format_double is shortest exact") {
  CHECK(csturm::format_double(0.1) == "0.1");
  CHECK(csturm::format_double(1.0) == "1");
  CHECK(std::stod(csturm::format_double(M_PI)) == M_PI);
  CHECK(csturm::format_double(1e300) == "1e+300");
}
