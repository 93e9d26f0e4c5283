#include "csturm/potential.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "csturm/error.hpp"
#include "csturm/quadrature.hpp"

namespace csturm {

Interval::Interval(double lo, double hi) : a(lo), b(hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw DomainError("interval endpoint is NaN");
  if (lo == kInf || hi == -kInf) throw DomainError("interval endpoints out of order");
  if (!(lo < hi)) throw DomainError("interval requires a < b");
}

Potential::Potential(Interval iv, std::shared_ptr<const Expr> expr, std::string source)
    : iv_(iv), expr_(std::move(expr)), source_(std::move(source)) {
  for (double b : expr_->breakpoints()) {
    if (iv_.interior(b)) breaks_.push_back(b);
  }
}

Potential Potential::with_meta(Endpoint e, const EndpointMeta& m) const {
  if (m.regular && !m.semiregular) throw DomainError("regular endpoint must also be semiregular");
  if ((m.regular || m.semiregular) && !iv_.finite(e)) {
    throw DomainError("regular/semiregular endpoint must be finite");
  }
  Potential out = *this;
  (e == Endpoint::a ? out.meta_a_ : out.meta_b_) = m;
  return out;
}

Potential parse_potential(std::string_view source, Interval iv) {
  auto expr = std::make_shared<const Expr>(Expr::parse(source));
  return Potential(iv, std::move(expr), std::string(source));
}

const char* to_string(EndpointClass c) {
  switch (c) {
    case EndpointClass::regular: return "regular";
    case EndpointClass::semiregular_only: return "semiregular_only";
    case EndpointClass::neither: return "neither";
  }
  return "neither";
}

namespace {

enum class SeriesVerdict { pending, converged, diverged };

// Tracks partial sums over geometric shells. Convergence: three successive
// tail-extrapolated totals agree; divergence: partial sums double three
// times in a row, or increments stop shrinking over eight shells (slow,
// logarithmic growth).
struct ShellSeries {
  std::vector<double> partial;
  std::vector<double> extrap;
  int doublings = 0;
  int flat = 0;
  SeriesVerdict verdict = SeriesVerdict::pending;

  void push(double increment, const ProbeOptions& opt) {
    double prev = partial.empty() ? 0.0 : partial.back();
    double cur = prev + increment;
    partial.push_back(cur);
    std::size_t n = partial.size();
    double ext = cur;
    if (n >= 3) {
      double d1 = partial[n - 1] - partial[n - 2];
      double d0 = partial[n - 2] - partial[n - 3];
      if (d0 > 0.0 && d1 >= 0.0 && d1 < d0) {
        double rho = d1 / d0;
        ext = cur + d1 * rho / (1.0 - rho);
      }
    }
    extrap.push_back(ext);
    if (verdict != SeriesVerdict::pending) return;

    if (prev > 0.0 && cur >= 2.0 * prev) ++doublings;
    else doublings = 0;
    if (doublings >= 3) {
      verdict = SeriesVerdict::diverged;
      return;
    }
    if (n >= 3) {
      double d1 = partial[n - 1] - partial[n - 2];
      double d0 = partial[n - 2] - partial[n - 3];
      if (d0 > 0.0 && d1 >= d0 * (1.0 - 1e-3)) ++flat;
      else flat = 0;
      if (flat >= 8) {
        verdict = SeriesVerdict::diverged;
        return;
      }
    }
    if (static_cast<int>(n) >= opt.agree_count + 1) {
      bool agree = true;
      for (int k = 1; k < opt.agree_count; ++k) {
        double x0 = extrap[n - 1], x1 = extrap[n - 1 - static_cast<std::size_t>(k)];
        double scale = std::max(std::abs(x0), 1e-300);
        if (std::abs(x0 - x1) > opt.agree_rel * scale && !(x0 == 0.0 && x1 == 0.0)) agree = false;
      }
      if (agree) verdict = SeriesVerdict::converged;
    }
  }
};

}  // namespace

ProbeReport probe_endpoint_report(const Potential& p, Endpoint which, const ProbeOptions& opt) {
  ProbeReport rep;
  const Interval& iv = p.interval();
  if (!iv.finite(which)) return rep;
  double e = iv.at(which);
  double other = which == Endpoint::a ? iv.b : iv.a;
  double eps0 = std::isfinite(other) ? std::min(1.0, 0.5 * std::abs(other - e)) : 1.0;
  double dir = which == Endpoint::a ? 1.0 : -1.0;
  const auto& cuts = p.breakpoints();

  ShellSeries s_abs, s_w;
  QuadOptions q;
  q.rel_tol = 1e-10;
  q.abs_tol = 1e-300;
  q.max_intervals = 4000;
  q.throw_on_budget = false;
  double outer = eps0;
  for (int k = 0; k < opt.max_shells; ++k) {
    double inner = outer * opt.shell_ratio;
    double x_out = e + dir * outer, x_in = e + dir * inner;
    if (x_in == e || x_in == x_out) break;  // shell below resolution of e
    auto fa = [&](double x) { return std::abs(p(x)); };
    auto fw = [&](double x) { return std::abs(x - e) * std::abs(p(x)); };
    auto ra = integrate(fa, std::min(x_in, x_out), std::max(x_in, x_out), cuts, q);
    auto rw = integrate(fw, std::min(x_in, x_out), std::max(x_in, x_out), cuts, q);
    double ia = std::isfinite(ra.value) ? ra.value : kInf;
    double iw = std::isfinite(rw.value) ? rw.value : kInf;
    if (ia == kInf) s_abs.verdict = SeriesVerdict::diverged;
    if (iw == kInf) s_w.verdict = SeriesVerdict::diverged;
    if (s_abs.verdict == SeriesVerdict::pending) s_abs.push(ia, opt);
    if (s_w.verdict == SeriesVerdict::pending) s_w.push(iw, opt);
    rep.shells = k + 1;
    outer = inner;
    if (s_abs.verdict != SeriesVerdict::pending && s_w.verdict != SeriesVerdict::pending) break;
  }
  rep.partial_abs = s_abs.partial;
  rep.partial_weighted = s_w.partial;
  if (s_abs.verdict == SeriesVerdict::pending || s_w.verdict == SeriesVerdict::pending) {
    std::vector<double> table = s_abs.partial;
    table.insert(table.end(), s_w.partial.begin(), s_w.partial.end());
    throw IndeterminateError(std::string("endpoint probe at ") + to_string(which) +
                                 " undecided after " + std::to_string(rep.shells) + " shells",
                             std::move(table));
  }
  if (s_abs.verdict == SeriesVerdict::converged) rep.int_abs_v = s_abs.extrap.back();
  if (s_w.verdict == SeriesVerdict::converged) rep.int_weighted_v = s_w.extrap.back();
  if (s_abs.verdict == SeriesVerdict::converged) {
    rep.cls = EndpointClass::regular;
  } else if (s_w.verdict == SeriesVerdict::converged) {
    rep.cls = EndpointClass::semiregular_only;
  } else {
    rep.cls = EndpointClass::neither;
  }
  return rep;
}

EndpointClass probe_endpoint(const Potential& p, Endpoint which) {
  return probe_endpoint_report(p, which).cls;
}

Potential probed(const Potential& p) {
  Potential out = p;
  for (Endpoint e : {Endpoint::a, Endpoint::b}) {
    EndpointMeta m = p.meta(e);
    EndpointClass c = probe_endpoint(p, e);
    m.regular = c == EndpointClass::regular;
    m.semiregular = c != EndpointClass::neither;
    m.probed = true;
    out = out.with_meta(e, m);
  }
  return out;
}

namespace {

std::vector<std::int64_t> first_primes(int count) {
  std::vector<std::int64_t> out;
  for (std::int64_t n = 2; static_cast<int>(out.size()) < count; ++n) {
    bool prime = true;
    for (std::int64_t q : out) {
      if (q * q > n) break;
      if (n % q == 0) {
        prime = false;
        break;
      }
    }
    if (prime) out.push_back(n);
  }
  return out;
}

// Calkin-Wilf: 1, 1/2, 2, 1/3, 3/2, ...
std::pair<std::int64_t, std::int64_t> calkin_wilf(std::int64_t k) {
  std::int64_t num = 1, den = 1;
  for (std::int64_t j = 1; j < k; ++j) {
    // next = 1 / (2 floor(q) - q + 1) with q = num/den
    std::int64_t fl = num / den;
    std::int64_t nnum = den;
    std::int64_t nden = 2 * fl * den - num + den;
    num = nnum;
    den = nden;
  }
  return {num, den};
}

// Signed rationals 0, 1, -1, 1/2, -1/2, 2, -2, ...
std::pair<std::int64_t, std::int64_t> signed_rational(std::int64_t k) {
  if (k == 0) return {0, 1};
  auto [n, d] = calkin_wilf((k + 1) / 2);
  return {k % 2 == 1 ? n : -n, d};
}

}  // namespace

ComplexRational complex_rational(std::int64_t index) {
  // Cantor unpairing of index+1 so that the first value is 1, not 0.
  std::int64_t z = index + 1;
  auto w = static_cast<std::int64_t>((std::sqrt(8.0 * static_cast<double>(z) + 1.0) - 1.0) / 2.0);
  while ((w + 1) * (w + 2) / 2 <= z) ++w;
  while (w * (w + 1) / 2 > z) --w;
  std::int64_t t = w * (w + 1) / 2;
  std::int64_t y = z - t;
  std::int64_t x = w - y;
  auto [rn, rd] = signed_rational(x);
  auto [in, id] = signed_rational(y);
  return {rn, rd, in, id};
}

Potential pathological_potential(int count, std::int64_t max_n) {
  if (count < 1) throw DomainError("pathological_potential needs at least one prime");
  auto primes = first_primes(count);
  struct Piece {
    std::int64_t n;
    std::size_t prime_index;
  };
  std::vector<Piece> pieces;
  for (std::size_t j = 0; j < primes.size(); ++j) {
    for (std::int64_t n = primes[j]; n <= max_n; n *= primes[j]) pieces.push_back({n, j});
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& l, const Piece& r) { return l.n < r.n; });

  auto constant_text = [](const ComplexRational& c) {
    std::ostringstream os;
    os << '(';
    if (c.re_num < 0) os << "-";
    os << std::abs(c.re_num) << '/' << c.re_den;
    os << (c.im_num < 0 ? " - " : " + ") << std::abs(c.im_num) << "i/" << c.im_den << ')';
    return os.str();
  };

  std::ostringstream src;
  src << "piecewise(0";
  double last_break = 0.0;
  bool open_piece = false;
  for (const Piece& pc : pieces) {
    std::int64_t lo = pc.n * pc.n - pc.n, hi = pc.n * pc.n + pc.n;
    if (!(open_piece && static_cast<double>(lo) == last_break)) {
      if (open_piece) src << ", 0";
      src << ", " << lo;
    }
    src << ", " << constant_text(complex_rational(static_cast<std::int64_t>(pc.prime_index)));
    src << ", " << hi;
    last_break = static_cast<double>(hi);
    open_piece = true;
  }
  src << ", 0)";
  return parse_potential(src.str(), Interval(0.0, kInf));
}

SignProbe probe_im_nonpositive(const Potential& p, std::size_t n, std::uint64_t seed, double window_lo,
                               double window_hi) {
  SignProbe out;
  const Interval& iv = p.interval();
  double lo = std::max(iv.a, window_lo), hi = std::min(iv.b, window_hi);
  auto check = [&](double x) {
    if (!(x > iv.a && x < iv.b)) return;
    double im = p(x).imag();
    ++out.probes;
    if (std::isnan(im)) return;
    if (im > out.max_imag) {
      out.max_imag = im;
      out.worst_x = x;
    }
    if (im > 0.0) out.all_nonpositive = false;
  };
  // additive recurrence with golden-ratio increment, shifted by the seed
  const double g = 0.6180339887498949;
  double t = std::fmod(0.5 + static_cast<double>(seed) * 0.7548776662466927, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    t += g;
    if (t >= 1.0) t -= 1.0;
    double u = std::clamp(t, 1e-12, 1.0 - 1e-12);
    double x;
    if (std::isfinite(lo) && std::isfinite(hi)) x = lo + u * (hi - lo);
    else if (std::isfinite(lo)) x = lo + u / (1.0 - u);
    else if (std::isfinite(hi)) x = hi - (1.0 - u) / u;
    else x = std::tan(3.141592653589793 * (u - 0.5));
    check(x);
  }
  for (double b : p.breakpoints()) {
    if (b < lo || b > hi) continue;
    check(std::nextafter(b, -kInf));
    check(b);
  }
  return out;
}

}  // namespace csturm
