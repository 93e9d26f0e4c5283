#include "csturm/ivp.hpp"

#include <algorithm>
#include <ostream>

#include "csturm/error.hpp"
#include "csturm/quadrature.hpp"
#include "volterra.hpp"

namespace csturm {

// ---------------------------------------------------------------- panels

PanelFunction::PanelFunction(std::vector<double> edges, int m, std::vector<cd> f, std::vector<cd> fp)
    : edges_(std::move(edges)), m_(m), f_(std::move(f)), fp_(std::move(fp)) {
  ref_ = gauss_legendre(m).nodes;
  bary_.resize(ref_.size());
  for (std::size_t j = 0; j < ref_.size(); ++j) {
    double w = 1.0;
    for (std::size_t k = 0; k < ref_.size(); ++k) {
      if (k != j) w *= ref_[j] - ref_[k];
    }
    bary_[j] = 1.0 / w;
  }
}

State<2> PanelFunction::operator()(double x) const {
  std::size_t np = edges_.size() - 1;
  std::size_t p = static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), x) - edges_.begin());
  p = p == 0 ? 0 : std::min(p - 1, np - 1);
  double c = 0.5 * (edges_[p] + edges_[p + 1]), hh = 0.5 * (edges_[p + 1] - edges_[p]);
  double t = (x - c) / hh;
  const std::size_t mm = static_cast<std::size_t>(m_);
  cd nf = 0.0, nfp = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < mm; ++j) {
    double dt = t - ref_[j];
    if (dt == 0.0) return {f_[p * mm + j], fp_[p * mm + j]};
    double w = bary_[j] / dt;
    nf += w * f_[p * mm + j];
    nfp += w * fp_[p * mm + j];
    den += w;
  }
  return {nf / den, nfp / den};
}

std::vector<double> PanelFunction::nodes() const {
  std::vector<double> out;
  for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
    double c = 0.5 * (edges_[p] + edges_[p + 1]), hh = 0.5 * (edges_[p + 1] - edges_[p]);
    for (double t : ref_) out.push_back(c + hh * t);
  }
  return out;
}

// ---------------------------------------------------------------- dense track

template <std::size_t N>
void DenseTrack<N>::finalize() {
  std::sort(steps_.begin(), steps_.end(), [](const DenseStep<N>& l, const DenseStep<N>& r) {
    return std::min(l.x0, l.x1) < std::min(r.x0, r.x1);
  });
  edges_.clear();
  if (steps_.empty()) return;
  edges_.push_back(std::min(steps_.front().x0, steps_.front().x1));
  for (const auto& s : steps_) edges_.push_back(std::max(s.x0, s.x1));
}

template <std::size_t N>
State<N> DenseTrack<N>::operator()(double x) const {
  std::size_t k = static_cast<std::size_t>(std::upper_bound(edges_.begin(), edges_.end(), x) - edges_.begin());
  k = k == 0 ? 0 : std::min(k - 1, steps_.size() - 1);
  const auto& s = steps_[k];
  // exact endpoint values avoid interpolation roundoff at mesh points
  if (x == s.x0) return s.r[0];
  if (x == s.x1) {
    State<N> y;
    for (std::size_t i = 0; i < N; ++i) y[i] = s.r[0][i] + s.r[1][i];
    return y;
  }
  return s(x);
}

template <std::size_t N>
std::vector<State<N>> DenseTrack<N>::edge_values() const {
  std::vector<State<N>> out;
  for (double e : edges_) out.push_back((*this)(e));
  return out;
}

template <std::size_t N>
void DenseTrack<N>::merge(const DenseTrack& other) {
  steps_.insert(steps_.end(), other.steps_.begin(), other.steps_.end());
  finalize();
}

template class DenseTrack<2>;
template class DenseTrack<4>;

// ---------------------------------------------------------------- trajectory

State<2> SolutionTrajectory::eval(double x) const {
  if (!(x >= d_->lo && x <= d_->hi)) {
    throw DomainError("point " + format_double(x) + " outside trajectory span [" + format_double(d_->lo) + ", " +
                      format_double(d_->hi) + "]");
  }
  for (const auto& pf : d_->panels) {
    if (x >= pf.lo() && x <= pf.hi()) return pf(x);
  }
  return d_->track(x);
}

std::vector<double> SolutionTrajectory::mesh() const {
  std::vector<double> out = d_->track.empty() ? std::vector<double>{} : d_->track.edges();
  for (const auto& pf : d_->panels) {
    auto n = pf.nodes();
    out.insert(out.end(), n.begin(), n.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SolutionTrajectory SolutionTrajectory::scaled(cd c) const {
  auto d = std::make_shared<Data>(*d_);
  DenseTrack<2> t;
  for (auto s : d_->track.steps()) {
    for (auto& r : s.r) {
      for (auto& v : r) v *= c;
    }
    t.add(s);
  }
  t.finalize();
  d->track = std::move(t);
  d->panels.clear();
  for (const auto& pf : d_->panels) {
    auto nodes = pf.nodes();
    std::vector<cd> f, fp;
    for (double x : nodes) {
      auto y = pf(x);
      f.push_back(c * y[0]);
      fp.push_back(c * y[1]);
    }
    int m = static_cast<int>(nodes.size() / (pf.edges().size() - 1));
    d->panels.emplace_back(pf.edges(), m, std::move(f), std::move(fp));
  }
  if (d_->g) {
    Rhs g0 = d_->g;
    d->g = [g0, c](double x) { return c * g0(x); };
  }
  return SolutionTrajectory(std::move(d));
}

void SolutionTrajectory::write_csv(std::ostream& os, const std::vector<double>& xs) const {
  os << "x,re_f,im_f,re_df,im_df\n";
  for (double x : xs) {
    auto y = eval(x);
    os << format_double(x) << ',' << format_double(y[0].real()) << ',' << format_double(y[0].imag()) << ','
       << format_double(y[1].real()) << ',' << format_double(y[1].imag()) << '\n';
  }
}

double default_anchor(const Interval& iv) {
  if (iv.a_finite() && iv.b_finite()) return 0.5 * (iv.a + iv.b);
  if (iv.a_finite()) return iv.a + 1.0;
  if (iv.b_finite()) return iv.b - 1.0;
  return 0.0;
}

namespace {

bool endpoint_is_regular(const Potential& p, Endpoint e) {
  if (!p.interval().finite(e)) return false;
  const auto& m = p.meta(e);
  if (m.probed) return m.regular;
  return probe_endpoint(p, e) == EndpointClass::regular;
}

bool endpoint_is_semiregular(const Potential& p, Endpoint e) {
  if (!p.interval().finite(e)) return false;
  const auto& m = p.meta(e);
  if (m.probed) return m.semiregular;
  return probe_endpoint(p, e) != EndpointClass::neither;
}

std::vector<double> merged_stops(const Potential& p, const std::vector<double>& extra) {
  std::vector<double> s = p.breakpoints();
  s.insert(s.end(), extra.begin(), extra.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

// Integrates the 2x2 system from (x0, y0) to x1 adding steps to `track`.
OdeResult<2> shoot(const Potential& p, cd lambda, const Rhs& g, double x0, const State<2>& y0, double x1,
                   const std::vector<double>& stops, const OdeOptions& opt, DenseTrack<2>& track) {
  auto rhs = [&](double x, const State<2>& y, State<2>& dy) {
    dy[0] = y[1];
    dy[1] = (p(x) - lambda) * y[0];
    if (g) dy[1] -= g(x);
  };
  OdeOptions o = opt;
  o.dense = true;
  auto res = integrate_ode<2>(rhs, x0, y0, x1, stops, o,
                              [&](const DenseStep<2>* ds, double, const State<2>&, double, const State<2>&) {
                                track.add(*ds);
                                return true;
                              });
  if (res.status == OdeStatus::step_underflow) {
    throw IntegrationError("step size underflow at x = " + format_double(res.x) +
                           " (singular point or non-integrable potential?)");
  }
  if (res.status == OdeStatus::budget) {
    throw IntegrationError("integration step budget exhausted at x = " + format_double(res.x));
  }
  return res;
}

}  // namespace

SolutionTrajectory solve_ivp(const Potential& p, cd lambda, double d, cd p0, cd p1, const Rhs& g, Span span,
                             const OdeOptions& opt, std::vector<double> g_breaks) {
  const Interval& iv = p.interval();
  if (!(span.lo <= d && d <= span.hi)) throw DomainError("initial point outside span");
  if (!(span.lo >= iv.a && span.hi <= iv.b)) throw DomainError("span not contained in the interval");
  if (!std::isfinite(span.lo) || !std::isfinite(span.hi)) throw DomainError("span must be finite");
  if (span.lo == iv.a && !endpoint_is_regular(p, Endpoint::a)) {
    throw DomainError("span reaches endpoint a, which is not regular");
  }
  if (span.hi == iv.b && !endpoint_is_regular(p, Endpoint::b)) {
    throw DomainError("span reaches endpoint b, which is not regular");
  }
  auto stops = merged_stops(p, g_breaks);
  auto data = std::make_shared<SolutionTrajectory::Data>(SolutionTrajectory::Data{p, lambda, g, d, d, {}, {}, false,
                                                                                  OdeStatus::ok});
  const State<2> y0{p0, p1};
  if (span.lo < d) {
    auto r = shoot(p, lambda, g, d, y0, span.lo, stops, opt, data->track);
    data->lo = r.x;
    if (r.status == OdeStatus::overflow) {
      data->truncated = true;
      data->status = r.status;
    }
  }
  if (span.hi > d) {
    auto r = shoot(p, lambda, g, d, y0, span.hi, stops, opt, data->track);
    data->hi = r.x;
    if (r.status == OdeStatus::overflow) {
      data->truncated = true;
      data->status = r.status;
    }
  }
  if (data->track.empty()) {
    // degenerate span {d}: keep a zero-length step so evaluation at d works
    DenseStep<2> s;
    s.x0 = d;
    s.x1 = d;
    s.r[0] = y0;
    data->track.add(s);
  }
  data->track.finalize();
  return SolutionTrajectory(std::move(data));
}

namespace {

// ∫ over [e, e ± w] of |(V - λ)(y - e)| by dyadic shells toward e.
double endpoint_weighted_integral(const Potential& p, cd lambda, double e, double dir, double w) {
  QuadOptions q;
  q.rel_tol = 1e-8;
  q.abs_tol = 1e-300;
  q.throw_on_budget = false;
  q.max_intervals = 2000;
  double total = 0.0;
  int small = 0;
  double outer = w;
  for (int k = 0; k < 200; ++k) {
    double inner = 0.5 * outer;
    double xo = e + dir * outer, xi = e + dir * inner;
    if (xi == e || xi == xo) break;
    auto fw = [&](double x) { return std::abs((p(x) - lambda) * (x - e)); };
    double part = integrate(fw, std::min(xi, xo), std::max(xi, xo), p.breakpoints(), q).value;
    if (!std::isfinite(part)) return kInf;
    total += part;
    if (part <= 1e-10 * total) {
      if (++small >= 3) break;
    } else {
      small = 0;
    }
    outer = inner;
  }
  return total;
}

constexpr int kPanelNodes = 16;

}  // namespace

double semiregular_window(const Potential& p, cd lambda, Endpoint e) {
  const Interval& iv = p.interval();
  double x0 = iv.at(e);
  double dir = e == Endpoint::a ? 1.0 : -1.0;
  double other = e == Endpoint::a ? iv.b : iv.a;
  double w = 1.0;
  if (std::isfinite(other)) w = std::min(w, 0.5 * std::abs(other - x0));
  for (double b : p.breakpoints()) {
    double dist = (b - x0) * dir;
    if (dist > 0.0) w = std::min(w, dist);
  }
  const double min_width = 1e-12 * std::max(1.0, std::abs(x0));
  while (endpoint_weighted_integral(p, lambda, x0, dir, w) > 0.5) {
    w *= 0.5;
    if (w < min_width) throw DomainError("contraction window shrank below minimum width");
  }
  return w;
}

SolutionTrajectory solve_semiregular(const Potential& p, cd lambda, Endpoint e, cd p1, std::optional<double> reach,
                                     const OdeOptions& opt) {
  const Interval& iv = p.interval();
  if (!iv.finite(e)) throw DomainError("semiregular solution needs a finite endpoint");
  if (!endpoint_is_semiregular(p, e)) {
    throw DomainError(std::string("endpoint ") + to_string(e) + " is not semiregular");
  }
  const double x0 = iv.at(e);
  const double dir = e == Endpoint::a ? 1.0 : -1.0;
  double target = reach.value_or(default_anchor(iv));
  if (!((target - x0) * dir > 0.0) || !(target >= iv.a && target <= iv.b)) {
    throw DomainError("reach point must lie inside the interval on the far side of the endpoint");
  }
  double w = std::min(semiregular_window(p, lambda, e), std::abs(target - x0));

  // dyadic panels toward the endpoint
  std::vector<double> dists;
  for (int k = 0; k <= 100; ++k) {
    double dist = w * std::ldexp(1.0, -k);
    double xe = x0 + dir * dist;
    // panel nodes must stay distinguishable from a nonzero endpoint
    if (xe == x0 || (!dists.empty() && x0 + dir * dists.back() == xe) || dist < 1e-12 * std::abs(x0)) break;
    dists.push_back(dist);
  }
  std::vector<double> edges{x0};
  for (auto it = dists.rbegin(); it != dists.rend(); ++it) edges.push_back(x0 + dir * *it);

  detail::VolterraPanels vp(edges, kPanelNodes);
  auto sol = detail::volterra_fixed_point(
      vp, [&](double x) { return p(x) - lambda; }, [](double) { return cd(0.0, 0.0); }, cd(0.0, 0.0), p1);

  std::vector<double> asc_edges = edges;
  std::vector<cd> f = sol.f, fp = sol.fp;
  if (dir < 0.0) {
    std::reverse(asc_edges.begin(), asc_edges.end());
    std::reverse(f.begin(), f.end());
    std::reverse(fp.begin(), fp.end());
  }
  PanelFunction head(asc_edges, kPanelNodes, std::move(f), std::move(fp));

  const double xw = x0 + dir * w;
  Span span = dir > 0 ? Span{xw, target} : Span{target, xw};
  SolutionTrajectory tail = solve_ivp(p, lambda, xw, sol.f_end, sol.fp_end, Rhs{}, span, opt);
  auto data = std::make_shared<SolutionTrajectory::Data>(tail.data());
  data->panels.push_back(std::move(head));
  if (dir > 0) data->lo = x0;
  else data->hi = x0;
  return SolutionTrajectory(std::move(data));
}

double neumann_contraction_bound(const Potential& p, double d, Span window, cd lambda) {
  double left = window.lo < d ? endpoint_weighted_integral(p, lambda, window.lo, 1.0, d - window.lo) : 0.0;
  double right = window.hi > d ? endpoint_weighted_integral(p, lambda, window.hi, -1.0, window.hi - d) : 0.0;
  return std::max(left, right);
}

SolutionTrajectory neumann_solve(const Potential& p, double d, const Rhs& g, Span window, cd lambda) {
  const Interval& iv = p.interval();
  if (!(window.lo <= d && d <= window.hi && window.lo < window.hi)) throw DomainError("window must contain d");
  if (!(window.lo >= iv.a && window.hi <= iv.b) || !std::isfinite(window.lo) || !std::isfinite(window.hi)) {
    throw DomainError("window must be a finite subinterval");
  }
  double bound = neumann_contraction_bound(p, d, window, lambda);
  if (!(bound < 1.0)) {
    throw DomainError("contraction bound " + format_double(bound) + " >= 1 on the window");
  }
  auto vml = [&](double x) { return p(x) - lambda; };
  auto gf = [&](double x) { return g ? g(x) : cd(0.0, 0.0); };
  constexpr int panels_per_side = 16;

  auto side_edges = [&](double end) {
    std::vector<double> e;
    for (int k = 0; k <= panels_per_side; ++k) e.push_back(d + (end - d) * k / panels_per_side);
    for (double b : p.breakpoints()) {
      if ((b - d) * (end - d) > 0.0 && (end - b) * (end - d) > 0.0) e.push_back(b);
    }
    std::sort(e.begin(), e.end(), [&](double l, double r) { return (l - d) * (end - d) < (r - d) * (end - d); });
    e.erase(std::unique(e.begin(), e.end()), e.end());
    return e;
  };

  std::vector<double> edges;
  std::vector<cd> f, fp;
  if (window.lo < d) {
    detail::VolterraPanels vp(side_edges(window.lo), kPanelNodes);
    auto sol = detail::volterra_fixed_point(vp, vml, gf, cd(0.0, 0.0), cd(0.0, 0.0));
    edges.assign(vp.edges().rbegin(), vp.edges().rend());
    f.assign(sol.f.rbegin(), sol.f.rend());
    fp.assign(sol.fp.rbegin(), sol.fp.rend());
  }
  if (window.hi > d) {
    detail::VolterraPanels vp(side_edges(window.hi), kPanelNodes);
    auto sol = detail::volterra_fixed_point(vp, vml, gf, cd(0.0, 0.0), cd(0.0, 0.0));
    if (edges.empty()) edges.push_back(d);
    edges.insert(edges.end(), vp.edges().begin() + 1, vp.edges().end());
    f.insert(f.end(), sol.f.begin(), sol.f.end());
    fp.insert(fp.end(), sol.fp.begin(), sol.fp.end());
  }
  auto data = std::make_shared<SolutionTrajectory::Data>(SolutionTrajectory::Data{
      p, lambda, g ? g : Rhs([](double) { return cd(0.0, 0.0); }), window.lo, window.hi, {}, {}, false,
      OdeStatus::ok});
  data->panels.emplace_back(std::move(edges), kPanelNodes, std::move(f), std::move(fp));
  return SolutionTrajectory(std::move(data));
}

cd wronskian(const SolutionTrajectory& u, const SolutionTrajectory& v, double x) {
  return wronskian(u.eval(x), v.eval(x));
}

cd lagrange_residual(const SolutionTrajectory& u, const SolutionTrajectory& v, double x1, double x2) {
  if (!(u.contains(x1) && u.contains(x2) && v.contains(x1) && v.contains(x2))) {
    throw DomainError("lagrange_residual: [x1, x2] not inside both spans");
  }
  std::vector<double> cuts = u.mesh();
  auto mv = v.mesh();
  cuts.insert(cuts.end(), mv.begin(), mv.end());
  cuts.insert(cuts.end(), u.potential().breakpoints().begin(), u.potential().breakpoints().end());
  auto integrand = [&](double x) {
    auto yu = u.eval(x), yv = v.eval(x);
    cd Lu = u.lambda() * yu[0] + u.g(x);
    cd Lv = v.lambda() * yv[0] + v.g(x);
    return Lu * yv[0] - yu[0] * Lv;
  };
  QuadOptions q;
  q.rel_tol = 1e-12;
  q.abs_tol = 1e-15;
  q.throw_on_budget = false;
  cd integral = integrate(integrand, x1, x2, cuts, q).value;
  return integral - (wronskian(u, v, x2) - wronskian(u, v, x1));
}

cd kodaira_check(const std::array<State<2>, 4>& w) {
  const auto& [f, g, h, k] = w;
  return wronskian(f, g) * wronskian(h, k) + wronskian(g, h) * wronskian(f, k) + wronskian(h, f) * wronskian(g, k);
}

// ---------------------------------------------------------------- 4x4 system

void quad_system_rhs(const Potential& p, cd lambda, double x, const State<4>& y, State<4>& dy) {
  cd V = p(x);
  dy[0] = -y[2];
  dy[1] = -y[3];
  dy[2] = -std::conj(V) * y[0] + y[1];
  dy[3] = -lambda * y[0] - V * y[1];
}

State<4> QuadSystemTrajectory::eval(double x) const {
  if (!(x >= track_.lo() && x <= track_.hi())) throw DomainError("point outside quad-system span");
  return track_(x);
}

State<4> QuadSystemTrajectory::residual(double x, double h) const {
  auto yp = eval(x + h), ym = eval(x - h), y = eval(x);
  State<4> d;
  for (std::size_t i = 0; i < 4; ++i) d[i] = (yp[i] - ym[i]) / (2.0 * h);
  cd V = p_(x);
  return {-d[3] - (lambda_ * y[0] + V * y[1]), -d[2] - (std::conj(V) * y[0] - y[1]), d[1] + y[3], d[0] + y[2]};
}

QuadSystemTrajectory solve_quad_system(const Potential& p, cd lambda, double d, const State<4>& phi0, Span span,
                                       const OdeOptions& opt) {
  const Interval& iv = p.interval();
  if (!(span.lo <= d && d <= span.hi)) throw DomainError("initial point outside span");
  if (!(span.lo >= iv.a && span.hi <= iv.b) || !std::isfinite(span.lo) || !std::isfinite(span.hi)) {
    throw DomainError("span must be a finite subinterval");
  }
  if (span.lo == iv.a && !endpoint_is_regular(p, Endpoint::a)) throw DomainError("span reaches non-regular a");
  if (span.hi == iv.b && !endpoint_is_regular(p, Endpoint::b)) throw DomainError("span reaches non-regular b");
  DenseTrack<4> track;
  bool truncated = false;
  auto rhs = [&](double x, const State<4>& y, State<4>& dy) { quad_system_rhs(p, lambda, x, y, dy); };
  OdeOptions o = opt;
  o.dense = true;
  for (double end : {span.lo, span.hi}) {
    if (end == d) continue;
    auto r = integrate_ode<4>(rhs, d, phi0, end, p.breakpoints(), o,
                              [&](const DenseStep<4>* ds, double, const State<4>&, double, const State<4>&) {
                                track.add(*ds);
                                return true;
                              });
    if (r.status == OdeStatus::step_underflow || r.status == OdeStatus::budget) {
      throw IntegrationError("quad-system integration failed at x = " + format_double(r.x));
    }
    if (r.status == OdeStatus::overflow) truncated = true;
  }
  if (track.empty()) {
    DenseStep<4> s;
    s.x0 = s.x1 = d;
    s.r[0] = phi0;
    track.add(s);
  }
  track.finalize();
  return QuadSystemTrajectory(p, lambda, std::move(track), truncated);
}

}  // namespace csturm
