#include "csturm/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "csturm/error.hpp"
#include "csturm/parallel.hpp"

namespace csturm {

namespace {

bool is_regular(const Potential& p, Endpoint e) {
  if (!p.interval().finite(e)) return false;
  if (p.meta(e).probed) return p.meta(e).regular;
  return probe_endpoint(p, e) == EndpointClass::regular;
}

const std::optional<BoundaryFunctional>& functional_at(const BoundarySpec& s, Endpoint e) {
  return e == Endpoint::a ? s.at_a : s.at_b;
}

double auto_cutoff(const Interval& iv, Endpoint e, double c) {
  const double dir = e == Endpoint::a ? -1.0 : 1.0;
  if (!iv.finite(e)) return c + dir * 10.0 * std::max(1.0, std::abs(c));
  return iv.at(e) + 1e-4 * (c - iv.at(e));
}

OdeOptions shooting_ode() {
  OdeOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-14;
  o.dense = false;
  o.cap_components = 2;
  return o;
}

// Starting point and data of the solution selected by the condition at e.
struct Start {
  double x;
  State<2> y;
  State<2> dy;  // ∂λ of y
};

Start start_data(const Realization& r, Endpoint e, cd lambda) {
  const Potential& p = r.potential();
  const auto& f = functional_at(r.spec(), e);
  const double s = e == Endpoint::a ? -1.0 : 1.0;
  if (!f) {
    const double X = r.end(e);
    cd kappa = std::sqrt(p(X) - lambda);
    if (kappa.real() < 0.0) kappa = -kappa;
    if (std::abs(kappa) < 1e-300) throw DomainError("decay selection degenerate at the cutoff: V(X) = lambda");
    return {X, {cd(1.0), -s * kappa}, {cd(0.0), s / (2.0 * kappa)}};
  }
  if (f->is_regular_vector()) return {p.interval().at(e), {f->vec()[0], f->vec()[1]}, {cd(0.0), cd(0.0)}};
  const SolutionTrajectory& g = f->rep();
  if (is_regular(p, e) && g.contains(p.interval().at(e))) {
    return {p.interval().at(e), g.eval(p.interval().at(e)), {cd(0.0), cd(0.0)}};
  }
  if (std::abs(g.lambda() - lambda) > 1e-14 * (1.0 + std::abs(lambda))) {
    throw DomainError("trajectory functional at an irregular endpoint is usable only at its own lambda");
  }
  const double x = e == Endpoint::a ? g.lo() : g.hi();
  return {x, g.eval(x), {cd(0.0), cd(0.0)}};
}

std::array<cd, 4> shoot_variational(const Realization& r, const Start& st, cd lambda) {
  const Potential& p = r.potential();
  auto rhs = [&](double x, const State<4>& y, State<4>& dy) {
    cd q = p(x) - lambda;
    dy[0] = y[1];
    dy[1] = q * y[0];
    dy[2] = y[3];
    dy[3] = q * y[2] - y[0];
  };
  State<4> y0{st.y[0], st.y[1], st.dy[0], st.dy[1]};
  auto res = integrate_ode<4>(rhs, st.x, y0, r.match(), p.breakpoints(), shooting_ode());
  if (res.status != OdeStatus::ok) {
    throw IntegrationError(std::string("shooting toward the matching point failed: ") + to_string(res.status));
  }
  return res.y;
}

}  // namespace

Realization::Realization(Potential p, BoundarySpec spec, RealizationOptions opt)
    : p_(std::move(p)), spec_(std::move(spec)), opt_(opt) {
  const Interval& iv = p_.interval();
  match_ = opt_.match.value_or(default_anchor(iv));
  if (!iv.interior(match_)) throw DomainError("matching point must lie inside the interval");
  for (Endpoint e : {Endpoint::a, Endpoint::b}) {
    const auto& f = functional_at(spec_, e);
    double& end = e == Endpoint::a ? end_a_ : end_b_;
    end = iv.at(e);
    if (f) {
      if (f->endpoint() != e) throw DomainError("boundary functional attached to the wrong endpoint");
      if (f->is_regular_vector()) {
        if (!is_regular(p_, e)) throw DomainError("regular boundary vector at a non-regular endpoint");
      } else if (!is_regular(p_, e) && boundary_index(p_, e) != 2) {
        throw DomainError("endpoint with boundary index 0 must carry no condition");
      }
      continue;
    }
    if (is_regular(p_, e) || boundary_index(p_, e) != 0) {
      throw DomainError(std::string("endpoint ") + to_string(e) + " has boundary index 2 and needs a condition");
    }
    const auto& user = e == Endpoint::a ? opt_.cutoff_a : opt_.cutoff_b;
    end = user.value_or(auto_cutoff(iv, e, match_));
    const bool inside = iv.interior(end) && (e == Endpoint::a ? end < match_ : end > match_);
    if (!inside) throw DomainError("cutoff must lie between the endpoint and the matching point");
  }
}

bool Realization::truncated(Endpoint e) const { return !functional_at(spec_, e).has_value(); }

Realization Realization::with_cutoffs_scaled(double factor) const {
  Realization out = *this;
  for (Endpoint e : {Endpoint::a, Endpoint::b}) {
    if (!truncated(e)) continue;
    double& end = e == Endpoint::a ? out.end_a_ : out.end_b_;
    if (p_.interval().finite(e)) {
      const double x = p_.interval().at(e);
      end = x + (end - x) / factor;
    } else {
      end = match_ + (end - match_) * factor;
    }
  }
  return out;
}

CharValue characteristic(const Realization& r, cd lambda) {
  auto u = shoot_variational(r, start_data(r, Endpoint::a, lambda), lambda);
  auto v = shoot_variational(r, start_data(r, Endpoint::b, lambda), lambda);
  CharValue out;
  out.w = v[0] * u[1] - v[1] * u[0];
  out.dw = v[2] * u[1] + v[0] * u[3] - v[3] * u[0] - v[1] * u[2];
  return out;
}

cd characteristic_wronskian(const Realization& r, cd lambda) { return characteristic(r, lambda).w; }

namespace {

class CachedChar {
public:
  CachedChar(const Realization& r, std::size_t budget) : r_(r), budget_(budget) {}

  CharValue at(cd z) {
    {
      std::lock_guard lk(mu_);
      auto it = cache_.find(key(z));
      if (it != cache_.end()) return it->second;
      if (cache_.size() >= budget_) throw DomainError("characteristic-function evaluation budget exhausted");
    }
    CharValue v = characteristic(r_, z);
    std::lock_guard lk(mu_);
    cache_.emplace(key(z), v);
    return v;
  }

  void prefetch(const std::vector<cd>& zs) {
    std::vector<cd> todo;
    {
      std::lock_guard lk(mu_);
      for (cd z : zs) {
        if (!cache_.count(key(z))) todo.push_back(z);
      }
    }
    parallel_for(todo.size(), [&](std::size_t i) { at(todo[i]); });
  }

  std::size_t evaluations() const { return cache_.size(); }
  const Realization& realization() const { return r_; }

private:
  static std::pair<double, double> key(cd z) { return {z.real(), z.imag()}; }
  const Realization& r_;
  std::size_t budget_;
  std::mutex mu_;
  std::map<std::pair<double, double>, CharValue> cache_;
};

struct Winding {
  int count = 0;
  bool near_root = false;
  double max_abs = 0.0;
};

constexpr double kPi = std::numbers::pi;

class Contour {
public:
  Contour(CachedChar& f, int min_samples) : f_(f), min_samples_(min_samples) {}

  Winding winding(const Region& g) {
    Winding prev;
    for (int m = min_samples_, round = 0; round < 6; m *= 2, ++round) {
      Winding w = winding_at(g, m);
      if (w.near_root) return w;
      if (round > 0 && w.count == prev.count) return w;
      prev = w;
    }
    throw DomainError("contour winding number did not stabilize");
  }

private:
  Winding winding_at(const Region& g, int m) {
    const cd corners[4] = {{g.re0, g.im0}, {g.re1, g.im0}, {g.re1, g.im1}, {g.re0, g.im1}};
    std::vector<cd> pts;
    for (int e = 0; e < 4; ++e) {
      for (int k = 0; k < m; ++k) {
        double t = static_cast<double>(k) / m;
        pts.push_back(corners[e] + t * (corners[(e + 1) % 4] - corners[e]));
      }
    }
    f_.prefetch(pts);
    size_ = std::max(g.re1 - g.re0, g.im1 - g.im0);
    Winding w;
    double total = 0.0, min_abs = kInf;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      cd za = pts[i], zb = pts[(i + 1) % pts.size()];
      cd wa = f_.at(za).w, wb = f_.at(zb).w;
      total += segment(za, wa, zb, wb, 0, min_abs, w.max_abs);
    }
    // |W/W'| estimates the distance from a sample to the nearest root
    for (cd z : pts) {
      CharValue v = f_.at(z);
      if (std::abs(v.w) < 1e-6 * size_ * std::abs(v.dw)) w.near_root = true;
    }
    if (min_abs == 0.0) w.near_root = true;
    double turns = total / (2.0 * kPi);
    w.count = static_cast<int>(std::lround(turns));
    if (std::abs(turns - w.count) > 0.1) w.near_root = true;
    return w;
  }

  double segment(cd za, cd wa, cd zb, cd wb, int depth, double& min_abs, double& max_abs) {
    min_abs = std::min({min_abs, std::abs(wa), std::abs(wb)});
    max_abs = std::max({max_abs, std::abs(wa), std::abs(wb)});
    if (wa == 0.0 || wb == 0.0) {
      min_abs = 0.0;
      return 0.0;
    }
    double d = std::arg(wb / wa);
    if (std::abs(d) < kPi / 4.0) return d;
    if (depth > 40) {
      min_abs = 0.0;
      return d;
    }
    cd zm = 0.5 * (za + zb);
    CharValue vm = f_.at(zm);
    if (std::abs(vm.w) < 1e-6 * size_ * std::abs(vm.dw)) min_abs = 0.0;
    cd wm = vm.w;
    return segment(za, wa, zm, wm, depth + 1, min_abs, max_abs) +
           segment(zm, wm, zb, wb, depth + 1, min_abs, max_abs);
  }

  CachedChar& f_;
  int min_samples_;
  double size_ = 0.0;
};

struct NewtonResult {
  cd z;
  bool ok = false;
};

NewtonResult newton(CachedChar& f, cd z, int mult, double tol) {
  for (int it = 0; it < 60; ++it) {
    CharValue v = f.at(z);
    if (v.w == 0.0) return {z, true};
    if (v.dw == 0.0) return {z, false};
    cd step = static_cast<double>(mult) * v.w / v.dw;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return {z, false};
    if (std::abs(step) < tol * (1.0 + std::abs(z))) return {z, true};
  }
  return {z, false};
}

bool inside(const Region& g, cd z, double margin) {
  return z.real() >= g.re0 - margin && z.real() <= g.re1 + margin && z.imag() >= g.im0 - margin &&
         z.imag() <= g.im1 + margin;
}

class RootSearch {
public:
  RootSearch(CachedChar& f, const FindOptions& opt) : f_(f), contour_(f, opt.min_edge_samples), opt_(opt) {}

  void run(const Region& g, int n) {
    if (n <= 0) return;
    const double wide = std::max(g.re1 - g.re0, g.im1 - g.im0);
    const cd c(0.5 * (g.re0 + g.re1), 0.5 * (g.im0 + g.im1));
    if (n == 1) {
      auto nr = newton(f_, c, 1, opt_.newton_tol);
      if (nr.ok && inside(g, nr.z, 1e-9 * (1.0 + std::abs(nr.z)))) {
        found.push_back({nr.z, 1});
        return;
      }
    }
    if (wide < 1e-9 * (1.0 + std::abs(c))) {
      auto nr = newton(f_, c, n, opt_.newton_tol);
      found.push_back({nr.ok ? nr.z : c, n});
      return;
    }
    static constexpr double offsets[] = {0.5, 0.5317, 0.4581, 0.5713, 0.4229, 0.6137};
    const bool split_re = (g.re1 - g.re0) >= (g.im1 - g.im0);
    for (double t : offsets) {
      Region lo = g, hi = g;
      if (split_re) {
        double m = g.re0 + t * (g.re1 - g.re0);
        lo.re1 = m;
        hi.re0 = m;
      } else {
        double m = g.im0 + t * (g.im1 - g.im0);
        lo.im1 = m;
        hi.im0 = m;
      }
      Winding wl = contour_.winding(lo);
      if (wl.near_root || wl.count < 0 || wl.count > n) continue;
      Winding wh = contour_.winding(hi);
      if (wh.near_root || wl.count + wh.count != n) continue;
      run(lo, wl.count);
      run(hi, wh.count);
      return;
    }
    throw DomainError("subdivision contour passes within tolerance of a root after jitter");
  }

  Contour& contour() { return contour_; }
  std::vector<std::pair<cd, int>> found;

private:
  CachedChar& f_;
  Contour contour_;
  FindOptions opt_;
};

}  // namespace

FindResult find_eigenvalues(const Realization& r, const Region& region, const FindOptions& opt) {
  if (!(region.re1 > region.re0) || !(region.im1 > region.im0)) throw UsageError("degenerate search region");
  CachedChar f(r, opt.max_evals);
  RootSearch search(f, opt);
  Region g = region;
  Winding top;
  const double size = std::max(g.re1 - g.re0, g.im1 - g.im0);
  for (int attempt = 0;; ++attempt) {
    top = search.contour().winding(g);
    if (!top.near_root) break;
    if (attempt == 4) throw DomainError("search region boundary passes within tolerance of a root");
    const double grow = 1e-4 * size * (attempt + 1);
    g = {region.re0 - grow, region.re1 + grow, region.im0 - grow, region.im1 + grow};
  }
  if (top.count < 0) throw DomainError("negative winding number: characteristic function has poles in the region");
  search.run(g, top.count);

  FindResult out;
  out.scale = top.max_abs;
  std::sort(search.found.begin(), search.found.end(),
            [](const auto& l, const auto& h) { return std::abs(l.first) < std::abs(h.first); });
  if (search.found.size() > opt.max_roots) search.found.resize(opt.max_roots);
  const bool cut = r.truncated(Endpoint::a) || r.truncated(Endpoint::b);
  std::optional<Realization> wider;
  if (cut) wider.emplace(r.with_cutoffs_scaled(2.0));
  for (auto [z, m] : search.found) {
    Eigenvalue ev;
    ev.lambda = z;
    ev.multiplicity = m;
    ev.residual = std::abs(f.at(z).w);
    ev.converged = ev.residual < 1e-8 * out.scale;
    if (wider) {
      CachedChar fw(*wider, 200);
      auto nr = newton(fw, z, m, opt.newton_tol);
      ev.cutoff_shift = nr.ok ? std::abs(nr.z - z) : kInf;
    }
    out.roots.push_back(ev);
  }
  out.evaluations = f.evaluations();
  return out;
}

GreensKernel resolvent_kernel(const Realization& r, cd lambda) {
  const Potential& p = r.potential();
  Start sa = start_data(r, Endpoint::a, lambda), sb = start_data(r, Endpoint::b, lambda);
  const Span span{sa.x, sb.x};
  OdeOptions o;
  o.rtol = 1e-12;
  o.atol = 1e-14;
  auto u = solve_ivp(p, lambda, sa.x, sa.y[0], sa.y[1], {}, span, o);
  auto v = solve_ivp(p, lambda, sb.x, sb.y[0], sb.y[1], {}, span, o);
  if (u.truncated() || v.truncated()) throw IntegrationError("shooting solution overflowed before the far end");
  const double c = r.match();
  State<2> uc = u.eval(c), vc = v.eval(c);
  cd w = wronskian(vc, uc);
  const double scale = std::hypot(std::abs(uc[0]), std::abs(uc[1])) * std::hypot(std::abs(vc[0]), std::abs(vc[1]));
  if (std::abs(w) < 1e-8 * scale) throw DomainError("lambda is within tolerance of an eigenvalue");
  return build_kernel(KernelKind::two_sided, u, v);
}

}  // namespace csturm
