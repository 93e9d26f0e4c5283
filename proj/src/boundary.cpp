#include "csturm/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "csturm/error.hpp"

namespace csturm {

namespace {

EndpointClass endpoint_class(const Potential& p, Endpoint e) {
  if (!p.interval().finite(e)) return EndpointClass::neither;
  const auto& m = p.meta(e);
  if (m.probed) return m.regular ? EndpointClass::regular : (m.semiregular ? EndpointClass::semiregular_only
                                                                          : EndpointClass::neither);
  return probe_endpoint(p, e);
}

bool settled(const std::vector<cd>& w, double tol, cd& value) {
  const std::size_t n = w.size();
  if (n < 4) return false;
  bool small = true;
  for (std::size_t k = n - 3; k < n; ++k) {
    if (!(std::abs(w[k] - w[k - 1]) <= tol * (1.0 + std::abs(w[n - 1])))) small = false;
  }
  if (small) {
    value = w[n - 1];
    return true;
  }
  // geometric differences: add the remaining tail of the last ratio
  cd d1 = w[n - 1] - w[n - 2], d2 = w[n - 2] - w[n - 3], d3 = w[n - 3] - w[n - 4];
  if (d2 == 0.0 || d3 == 0.0) return false;
  cd r1 = d1 / d2, r2 = d2 / d3;
  if (!(std::abs(r1) < 0.95 && std::abs(r2) < 0.95 && std::abs(r1 - r2) < 0.1)) return false;
  cd tail = d1 * r1 / (1.0 - r1);
  value = w[n - 1] + tail;
  return std::abs(tail) <= 1e-6 * (1.0 + std::abs(value));
}

void two_rhs(const Potential& p, cd lambda, double x, const State<2>& y, State<2>& dy) {
  dy[0] = y[1];
  dy[1] = (p(x) - lambda) * y[0];
}

template <std::size_t N>
TailRecord walk_ray(LogRay<N>& ray, const std::vector<double>& ends, const std::string& label,
                    const TailOptions& topt, std::size_t push_count = static_cast<std::size_t>(-1)) {
  TailSeries ts(topt);
  TailRecord rec;
  rec.label = label;
  auto weight = [](double, const State<N>& y) { return std::norm(y[0]); };
  try {
    for (std::size_t k = 1; k < ends.size() && k <= push_count; ++k) {
      ts.push(ray.advance(ends[k], weight), ends[k]);
      if (ts.verdict() != TailVerdict::undecided) break;
    }
  } catch (const IntegrationError& err) {
    rec.note = err.what();
  }
  rec.verdict = ts.verdict();
  rec.shell_ends = ts.shell_ends();
  rec.log10_partial = ts.log10_partial_sums();
  rec.renormalizations = ray.renormalizations();
  return rec;
}

std::vector<double> walk_points(double x0, double e, int max_shells) {
  ShellWalk walk(x0, e);
  std::vector<double> pts{x0};
  for (int k = 1; k <= max_shells && walk.usable(k); ++k) pts.push_back(walk[k]);
  return pts;
}

// M+1 points from x0 to X, geometric toward e.
std::vector<double> sub_walk(double x0, double X, double e, int M) {
  std::vector<double> s(M + 1);
  if (std::isfinite(e)) {
    double r = std::pow((X - e) / (x0 - e), 1.0 / M);
    for (int i = 0; i <= M; ++i) s[i] = e + (x0 - e) * std::pow(r, i);
  } else {
    double L = std::max(1.0, std::abs(x0)), sg = e > 0 ? 1.0 : -1.0;
    double q = std::pow(1.0 + std::abs(X - x0) / L, 1.0 / M);
    for (int i = 0; i <= M; ++i) s[i] = x0 + sg * L * (std::pow(q, i) - 1.0);
  }
  s[0] = x0;
  s[M] = X;
  return s;
}

std::vector<double> evidence_table(const std::vector<TailRecord>& ev) {
  std::vector<double> t;
  for (const auto& r : ev) t.insert(t.end(), r.log10_partial.begin(), r.log10_partial.end());
  return t;
}

}  // namespace

EndpointLimit endpoint_limit(const std::function<cd(double)>& h, double lo, double hi, const Interval& iv, Endpoint e,
                             double tol) {
  if (!(lo < hi)) throw DomainError("empty span for endpoint limit");
  const double target = iv.at(e);
  const double edge = e == Endpoint::a ? lo : hi;
  EndpointLimit out;
  if (edge == target) {
    out.value = h(edge);
    out.exact = true;
    out.xs = {edge};
    out.samples = {out.value};
    return out;
  }
  const double far = e == Endpoint::a ? hi : lo;
  for (int k = 0; k < 200; ++k) {
    double x;
    if (std::isfinite(target)) {
      x = target + (far - target) * std::ldexp(1.0, -k);
      if (std::abs(x - target) <= 1e-14 * std::max(1.0, std::abs(target))) break;
    } else {
      double sg = target > 0 ? 1.0 : -1.0;
      x = far + sg * std::max(1.0, std::abs(far)) * (std::pow(1.5, k) - 1.0);
    }
    if (x < lo || x > hi) break;
    out.xs.push_back(x);
    out.samples.push_back(h(x));
  }
  if (out.samples.size() < 4) throw DomainError("span does not approach the endpoint far enough for a limit");
  if (!settled(out.samples, tol, out.value)) {
    std::vector<double> table;
    for (auto s : out.samples) table.push_back(std::abs(s));
    throw IndeterminateError(std::string("limit at endpoint ") + to_string(e) + " undetermined", table);
  }
  return out;
}

EndpointLimit wronskian_at_endpoint(const SolutionTrajectory& f, const SolutionTrajectory& g, Endpoint e) {
  double lo = std::max(f.lo(), g.lo()), hi = std::min(f.hi(), g.hi());
  return endpoint_limit([&](double x) { return wronskian(f.eval(x), g.eval(x)); }, lo, hi,
                        f.potential().interval(), e);
}

DimReport dim_U_report(const Potential& p, Endpoint e, cd lambda, const DimOptions& opt) {
  DimReport rep;
  rep.endpoint = e;
  rep.lambda = lambda;
  auto cls = endpoint_class(p, e);
  if (cls != EndpointClass::neither) {
    rep.dim = 2;
    rep.method = cls == EndpointClass::regular ? "regular" : "semiregular";
    return rep;
  }
  rep.method = "tails";
  const Interval& iv = p.interval();
  const double x0 = default_anchor(iv), target = iv.at(e);
  auto pts = walk_points(x0, target, opt.max_shells);
  OdeOptions o = opt.ode;
  o.max_steps = opt.max_steps;
  auto rhs = [&p, lambda](double x, const State<2>& y, State<2>& dy) { two_rhs(p, lambda, x, y, dy); };

  std::size_t used = 0;
  for (int j = 0; j < 2; ++j) {
    State<2> y0{};
    y0[j] = 1.0;
    LogRay<2> ray(rhs, x0, y0, p.breakpoints(), o);
    auto rec = walk_ray(ray, pts, j == 0 ? "raw(1,0)" : "raw(0,1)", opt.tails);
    used = std::max(used, rec.shell_ends.size());
    rep.overflow = rep.overflow || rec.renormalizations > 0;
    rep.evidence.push_back(std::move(rec));
  }
  const auto v0 = rep.evidence[0].verdict, v1 = rep.evidence[1].verdict;
  if (v0 == TailVerdict::finite && v1 == TailVerdict::finite) {
    rep.dim = 2;
    return rep;
  }
  if ((v0 == TailVerdict::finite && v1 == TailVerdict::infinite) ||
      (v1 == TailVerdict::finite && v0 == TailVerdict::infinite)) {
    rep.dim = 1;
    return rep;
  }
  if (v0 == TailVerdict::undecided || v1 == TailVerdict::undecided) {
    throw IndeterminateError(std::string("square-integrability near ") + to_string(e) + " undetermined (log10 tails)",
                             evidence_table(rep.evidence));
  }

  // Both raw solutions grow: test the subdominant one, integrated back from a
  // far point X with decaying WKB data. Shells in the last two sub-steps next
  // to X are skipped, where the start data still carries the growing mode.
  const double dir = e == Endpoint::b ? 1.0 : -1.0;
  for (int j = 1; j <= 6; ++j) {
    std::size_t K = used + static_cast<std::size_t>(j);
    if (K >= pts.size()) break;
    const double X = pts[K];
    const int M = 12 + 2 * (j - 1);
    auto s = sub_walk(x0, X, target, M);
    cd kappa = std::sqrt(p(X) - lambda);
    if (kappa.real() < 0.0) kappa = -kappa;
    LogRay<2> ray(rhs, X, State<2>{1.0, -dir * kappa}, p.breakpoints(), o);
    std::vector<double> inc(M + 1, 0.0);
    TailRecord rec;
    rec.label = "subdominant(X=" + format_double(X) + ")";
    try {
      auto weight = [](double, const State<2>& y) { return std::norm(y[0]); };
      for (int i = M; i >= 1; --i) inc[i] = ray.advance(s[i - 1], weight);
      TailSeries ts(opt.tails);
      for (int i = 1; i <= M - 2; ++i) {
        ts.push(inc[i], s[i]);
        if (ts.verdict() != TailVerdict::undecided) break;
      }
      rec.verdict = ts.verdict();
      rec.shell_ends = ts.shell_ends();
      rec.log10_partial = ts.log10_partial_sums();
    } catch (const IntegrationError& err) {
      rec.note = err.what();
    }
    rec.renormalizations = ray.renormalizations();
    rep.overflow = rep.overflow || rec.renormalizations > 0;
    auto verdict = rec.verdict;
    rep.evidence.push_back(std::move(rec));
    if (verdict == TailVerdict::finite) {
      rep.dim = 1;
      return rep;
    }
    if (verdict == TailVerdict::infinite) {
      rep.dim = 0;
      return rep;
    }
  }
  throw IndeterminateError(std::string("subdominant solution near ") + to_string(e) + " undetermined (log10 tails)",
                           evidence_table(rep.evidence));
}

int dim_U(const Potential& p, Endpoint e, cd lambda) { return dim_U_report(p, e, lambda).dim; }

int boundary_index(const Potential& p, Endpoint e, bool check_second_lambda) {
  int nu = dim_U(p, e, cd(0.0, 1.0)) == 2 ? 2 : 0;
  if (check_second_lambda) {
    int nu2 = dim_U(p, e, cd(1.0, 1.0)) == 2 ? 2 : 0;
    if (nu2 != nu) {
      throw IndeterminateError("boundary index differs between lambda = i and 1+i",
                               {static_cast<double>(nu), static_cast<double>(nu2)});
    }
  }
  return nu;
}

ClassificationReport classify(const Potential& p, cd lambda, const DimOptions& opt) {
  ClassificationReport r;
  r.lambda = lambda;
  r.a = dim_U_report(p, Endpoint::a, lambda, opt);
  r.b = dim_U_report(p, Endpoint::b, lambda, opt);
  r.dim_Ua = r.a.dim;
  r.dim_Ub = r.b.dim;
  r.nu_a = r.dim_Ua == 2 ? 2 : 0;
  r.nu_b = r.dim_Ub == 2 ? 2 : 0;
  return r;
}

std::vector<TailRecord> quad_system_tails(const Potential& p, Endpoint e, cd lambda, const DimOptions& opt) {
  const Interval& iv = p.interval();
  const double x0 = default_anchor(iv);
  auto pts = walk_points(x0, iv.at(e), opt.max_shells);
  OdeOptions o = opt.ode;
  o.max_steps = opt.max_steps;
  o.cap_components = 4;
  auto rhs = [&p, lambda](double x, const State<4>& y, State<4>& dy) { quad_system_rhs(p, lambda, x, y, dy); };
  std::vector<TailRecord> out;
  for (int j = 0; j < 4; ++j) {
    State<4> y0{};
    y0[j] = 1.0;
    LogRay<4> ray(rhs, x0, y0, p.breakpoints(), o);
    out.push_back(walk_ray(ray, pts, "phi" + std::to_string(j + 1), opt.tails));
  }
  return out;
}

BoundaryFunctional BoundaryFunctional::regular(Endpoint e, cd a0, cd a1) {
  if (a0 == 0.0 && a1 == 0.0) throw DomainError("boundary vector must be nonzero");
  BoundaryFunctional f;
  f.e_ = e;
  f.vec_ = {a0, a1};
  return f;
}

BoundaryFunctional BoundaryFunctional::trajectory(Endpoint e, SolutionTrajectory g) {
  BoundaryFunctional f;
  f.e_ = e;
  f.rep_ = std::move(g);
  return f;
}

namespace {

State<2> data_at_regular_end(const SolutionTrajectory& f, Endpoint e) {
  double x = f.potential().interval().at(e);
  if (!std::isfinite(x) || !f.contains(x)) throw DomainError("trajectory does not reach the regular endpoint");
  return f.eval(x);
}

}  // namespace

cd BoundaryFunctional::apply(const SolutionTrajectory& f) const {
  if (rep_) return wronskian_at_endpoint(*rep_, f, e_).value;
  return wronskian(State<2>{vec_[0], vec_[1]}, data_at_regular_end(f, e_));
}

cd symplectic_form(const BoundaryFunctional& phi, const BoundaryFunctional& psi) {
  if (phi.endpoint() != psi.endpoint()) throw DomainError("functionals live at different endpoints");
  const Endpoint e = phi.endpoint();
  if (phi.is_regular_vector() && psi.is_regular_vector()) {
    return phi.vec()[0] * psi.vec()[1] - phi.vec()[1] * psi.vec()[0];
  }
  if (!phi.is_regular_vector() && !psi.is_regular_vector()) return wronskian_at_endpoint(phi.rep(), psi.rep(), e).value;
  if (phi.is_regular_vector()) return wronskian(State<2>{phi.vec()[0], phi.vec()[1]}, data_at_regular_end(psi.rep(), e));
  return wronskian(data_at_regular_end(phi.rep(), e), State<2>{psi.vec()[0], psi.vec()[1]});
}

namespace {

// ⟦φ̄|φ⟧/2i = Im(ḡ g') at the endpoint for a representative g.
double conj_form(const Potential& p, const BoundaryFunctional& phi) {
  if (phi.is_regular_vector()) {
    if (endpoint_class(p, phi.endpoint()) != EndpointClass::regular) {
      throw DomainError(std::string("regular boundary vector given at non-regular endpoint ") +
                        to_string(phi.endpoint()));
    }
    return (std::conj(phi.vec()[0]) * phi.vec()[1]).imag();
  }
  const auto& g = phi.rep();
  auto lim = endpoint_limit([&](double x) { return cd((std::conj(g.f(x)) * g.df(x)).imag(), 0.0); }, g.lo(), g.hi(),
                            p.interval(), phi.endpoint());
  return lim.value.real();
}

double conj_scale(const BoundaryFunctional& phi) {
  if (phi.is_regular_vector()) return std::norm(phi.vec()[0]) + std::norm(phi.vec()[1]);
  const auto& g = phi.rep();
  double x = phi.endpoint() == Endpoint::a ? g.lo() : g.hi();
  return std::norm(g.f(x)) + std::norm(g.df(x));
}

}  // namespace

DissipativityReport dissipativity_certificate(const Potential& p, const BoundarySpec& spec, std::uint64_t seed,
                                              std::size_t probes) {
  DissipativityReport r;
  r.sign = probe_im_nonpositive(p, probes, seed);
  if (r.sign.max_imag > 0.0 && r.sign.max_imag <= 1e-12) {
    throw IndeterminateError("sign of Im V indeterminate on probes (round-off level positive value)",
                             {r.sign.max_imag, r.sign.worst_x});
  }
  if (spec.at_a && spec.at_a->endpoint() != Endpoint::a) throw DomainError("condition at a refers to endpoint b");
  if (spec.at_b && spec.at_b->endpoint() != Endpoint::b) throw DomainError("condition at b refers to endpoint a");
  if (spec.at_a) r.q_a = conj_form(p, *spec.at_a);
  if (spec.at_b) r.q_b = conj_form(p, *spec.at_b);

  if (!r.sign.all_nonpositive) {
    r.reason = "Im V = " + format_double(r.sign.max_imag) + " > 0 at x = " + format_double(r.sign.worst_x);
    return r;
  }
  for (Endpoint e : {Endpoint::a, Endpoint::b}) {
    const auto& f = e == Endpoint::a ? spec.at_a : spec.at_b;
    if (!f) {
      if (boundary_index(p, e) == 2) {
        r.reason = std::string("no condition at endpoint ") + to_string(e) + " with boundary index 2";
        return r;
      }
      continue;
    }
    double q = e == Endpoint::a ? *r.q_a : *r.q_b;
    double slack = 1e-12 * conj_scale(*f);
    if (e == Endpoint::a && q > slack) {
      r.reason = "Im(conj(a0) a1) = " + format_double(q) + " > 0 at a";
      return r;
    }
    if (e == Endpoint::b && q < -slack) {
      r.reason = "Im(conj(b0) b1) = " + format_double(q) + " < 0 at b";
      return r;
    }
  }
  r.certified = true;
  r.reason = "Im V <= 0 on " + std::to_string(r.sign.probes) + " probes; boundary signs hold";
  return r;
}

cd greens_identity_residual(const SolutionTrajectory& f, const SolutionTrajectory& g) {
  double lo = std::max(f.lo(), g.lo()), hi = std::min(f.hi(), g.hi());
  return lagrange_residual(f, g, lo, hi);
}

}  // namespace csturm
