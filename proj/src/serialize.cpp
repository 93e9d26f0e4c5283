#include "csturm/serialize.hpp"

#include <cmath>

#include "csturm/error.hpp"

namespace csturm {

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
  }
  throw UsageError("expected a number, got " + j.dump());
}

Json complex_json(cd z) { return Json::array({number(z.real()), number(z.imag())}); }

cd complex_from(const Json& j) {
  if (j.is_array() && j.size() == 2) return {number_from(j[0]), number_from(j[1])};
  return {number_from(j), 0.0};
}

Json to_json(const Interval& iv) {
  return {{"a", number(iv.a)}, {"b", number(iv.b)}, {"a_finite", iv.a_finite()}, {"b_finite", iv.b_finite()}};
}

Interval interval_from_json(const Json& j) {
  try {
    return Interval(number_from(j.at("a")), number_from(j.at("b")));
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed interval: ") + e.what());
  }
}

namespace {

Json meta_json(const EndpointMeta& m) {
  Json j{{"regular", m.regular}, {"semiregular", m.semiregular}, {"probed", m.probed}};
  if (m.im_nonpositive_hint) j["im_nonpositive_hint"] = *m.im_nonpositive_hint;
  return j;
}

EndpointMeta meta_from(const Json& j) {
  EndpointMeta m;
  m.regular = j.value("regular", false);
  m.semiregular = j.value("semiregular", false);
  m.probed = j.value("probed", false);
  if (j.contains("im_nonpositive_hint")) m.im_nonpositive_hint = j["im_nonpositive_hint"].get<bool>();
  return m;
}

Json tail_list(const std::vector<TailRecord>& ts) {
  Json a = Json::array();
  for (const auto& t : ts) a.push_back(to_json(t));
  return a;
}

}  // namespace

Json to_json(const Potential& p) {
  return {{"interval", to_json(p.interval())},
          {"expr", p.source()},
          {"meta", {{"a", meta_json(p.meta(Endpoint::a))}, {"b", meta_json(p.meta(Endpoint::b))}}}};
}

Potential potential_from_json(const Json& j) {
  if (!j.contains("expr") || !j.contains("interval")) throw UsageError("potential JSON needs expr and interval");
  Potential p = parse_potential(j["expr"].get<std::string>(), interval_from_json(j["interval"]));
  if (j.contains("meta")) {
    const auto& m = j["meta"];
    if (m.contains("a")) p = p.with_meta(Endpoint::a, meta_from(m["a"]));
    if (m.contains("b")) p = p.with_meta(Endpoint::b, meta_from(m["b"]));
  }
  return p;
}

Json to_json(const TailRecord& t) {
  Json ends = Json::array(), parts = Json::array();
  for (double x : t.shell_ends) ends.push_back(number(x));
  for (double x : t.log10_partial) parts.push_back(number(x));
  Json j{{"label", t.label},
         {"verdict", to_string(t.verdict)},
         {"shell_ends", ends},
         {"log10_partial", parts},
         {"renormalizations", t.renormalizations}};
  if (!t.note.empty()) j["note"] = t.note;
  return j;
}

Json to_json(const DimReport& r) {
  return {{"dim", r.dim},
          {"endpoint", to_string(r.endpoint)},
          {"lambda", complex_json(r.lambda)},
          {"method", r.method},
          {"overflow", r.overflow},
          {"evidence", tail_list(r.evidence)}};
}

Json to_json(const ClassificationReport& r) {
  return {{"nu_a", r.nu_a},
          {"nu_b", r.nu_b},
          {"dim_Ua", r.dim_Ua},
          {"dim_Ub", r.dim_Ub},
          {"lambda", complex_json(r.lambda)},
          {"evidence", Json::array({to_json(r.a), to_json(r.b)})}};
}

Json to_json(const WeylDisk& d) {
  return {{"d", number(d.d)},
          {"center", complex_json(d.center)},
          {"radius", number(d.radius)},
          {"u_norm_sq", number(d.u_norm_sq)},
          {"uv", complex_json(d.uv)},
          {"v_norm_sq", number(d.v_norm_sq)}};
}

Json to_json(const TrichotomyReport& r, bool with_trace) {
  Json radii = Json::array();
  for (double x : r.extrapolated_radii) radii.push_back(number(x));
  Json j{{"case", to_string(r.kind)},
         {"limit_radius_estimate", number(r.limit_radius_estimate)},
         {"m_point_estimate", complex_json(r.m_point_estimate)},
         {"final_radius", number(r.final_radius)},
         {"radius_stabilized", r.radius_stabilized},
         {"nesting_ok", r.nesting_ok},
         {"nesting_violations", r.nesting_violations},
         {"overflow_truncated", r.overflow_truncated},
         {"budget_exhausted", r.budget_exhausted},
         {"norm_verdict", to_string(r.norm_verdict)},
         {"trace_length", r.trace.size()},
         {"extrapolated_radii", radii},
         {"dim", to_json(r.dim)}};
  if (with_trace) {
    Json t = Json::array();
    for (const auto& d : r.trace) t.push_back(to_json(d));
    j["trace"] = t;
  }
  return j;
}

Json to_json(const DissipativityReport& r) {
  Json j{{"certified", r.certified},
         {"reason", r.reason},
         {"sign", {{"all_nonpositive", r.sign.all_nonpositive},
                   {"max_imag", number(r.sign.max_imag)},
                   {"worst_x", number(r.sign.worst_x)},
                   {"probes", r.sign.probes}}}};
  j["q_a"] = r.q_a ? number(*r.q_a) : Json(nullptr);
  j["q_b"] = r.q_b ? number(*r.q_b) : Json(nullptr);
  return j;
}

Json to_json(const Eigenvalue& e) {
  return {{"lambda", complex_json(e.lambda)},
          {"residual", number(e.residual)},
          {"multiplicity", e.multiplicity},
          {"converged", e.converged},
          {"cutoff_shift", number(e.cutoff_shift)}};
}

Json to_json(const FindResult& r) {
  Json roots = Json::array();
  for (const auto& e : r.roots) roots.push_back(to_json(e));
  return {{"roots", roots}, {"scale", number(r.scale)}, {"evaluations", r.evaluations}};
}

}  // namespace csturm
