#include <doctest.h>

#include <cmath>

#include "csturm/error.hpp"
#include "csturm/serialize.hpp"

using namespace csturm;

TEST_CASE("non-finite numbers as strings") {
  CHECK(number(1.5) == Json(1.5));
  CHECK(number(kInf) == Json("inf"));
  CHECK(number(-kInf) == Json("-inf"));
  CHECK(number(std::nan("")) == Json("nan"));
  CHECK(number_from(Json("inf")) == kInf);
  CHECK(number_from(Json("-inf")) == -kInf);
  CHECK(std::isnan(number_from(Json("nan"))));
  CHECK(number_from(Json(2)) == 2.0);
  CHECK_THROWS_AS(number_from(Json("two")), UsageError);
}

TEST_CASE("complex values") {
  CHECK(complex_json(cd(1, -2)).dump() == "[1.0,-2.0]");
  CHECK(complex_from(Json::array({3, 4})) == cd(3, 4));
  CHECK(complex_from(Json(5)) == cd(5, 0));
}

TEST_CASE("potential round trip") {
  Potential p = probed(parse_potential("x^2 - 1.5i*x", Interval(0, kInf)));
  Json j = to_json(p);
  CHECK(j["interval"]["a"] == Json(0.0));
  CHECK(j["interval"]["b"] == Json("inf"));
  CHECK(j["interval"]["a_finite"] == Json(true));
  CHECK(j["interval"]["b_finite"] == Json(false));
  CHECK(j["expr"] == Json("x^2 - 1.5i*x"));
  CHECK(j["meta"]["a"]["regular"] == Json(true));
  Potential q = potential_from_json(Json::parse(j.dump()));
  CHECK(q.interval().a == 0.0);
  CHECK(q.interval().b == kInf);
  CHECK(q.expr() == p.expr());
  CHECK(q.meta(Endpoint::a).regular);
  CHECK(q(2.0) == p(2.0));
  CHECK_THROWS_AS(interval_from_json(Json::parse(R"({"a": 1})")), UsageError);
}

TEST_CASE("report shapes") {
  auto c = classify(probed(parse_potential("0", Interval(0, kInf))));
  Json j = to_json(c);
  CHECK(j["nu_a"] == Json(2));
  CHECK(j["nu_b"] == Json(0));
  CHECK(j.contains("dim_Ua"));
  CHECK(j.contains("lambda"));
  CHECK(j["evidence"].is_array());

  Eigenvalue e{cd(1, 2), 1e-12, 1, true, 0.0};
  Json ej = to_json(e);
  CHECK(ej["lambda"].dump() == "[1.0,2.0]");
  CHECK(ej["multiplicity"] == Json(1));

  WeylDisk d;
  d.d = 2.0;
  d.center = cd(0.5, 0.5);
  d.radius = 0.1;
  Json dj = to_json(d);
  CHECK(dj["radius"] == Json(0.1));
  CHECK(dj["center"].dump() == "[0.5,0.5]");
}
