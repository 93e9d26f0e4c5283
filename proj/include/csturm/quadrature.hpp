#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "csturm/error.hpp"

namespace csturm {

struct QuadOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-14;
  std::size_t max_intervals = 20000;
  bool throw_on_budget = true;
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F, class T>
Panel<T> gk15(F& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T fc = f(c);
  T resk = fc * kWgk[7];
  T resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    double dx = h * kXgk[j];
    T s = f(c - dx) + f(c + dx);
    resk += s * kWgk[j];
    if (j % 2 == 1) resg += s * kWg[j / 2];
  }
  return {a, b, resk * h, magnitude((resk - resg) * h)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) quadrature on [a, b], starting from
// the partition given by `cuts` (points outside ]a,b[ are ignored). The
// orientation b < a is allowed and yields the negated integral.
template <class F>
auto integrate(F&& f, double a, double b, std::span<const double> cuts = {},
               const QuadOptions& opt = {}) {
  using T = std::decay_t<decltype(f(a))>;
  QuadResult<T> out;
  if (a == b) return out;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<double> edges{a};
  for (double c : cuts) {
    if (c > a && c < b) edges.push_back(c);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<detail::Panel<T>> heap;
  T total{};
  double err = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    auto p = detail::gk15<F, T>(f, edges[k], edges[k + 1]);
    total += p.value;
    err += p.error;
    heap.push(p);
    out.evaluations += 15;
  }
  std::size_t panels = heap.size();
  while (err > std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total))) {
    if (panels >= opt.max_intervals) {
      out.converged = false;
      break;
    }
    auto worst = heap.top();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      out.converged = false;
      break;
    }
    heap.pop();
    auto l = detail::gk15<F, T>(f, worst.a, mid);
    auto r = detail::gk15<F, T>(f, mid, worst.b);
    out.evaluations += 30;
    total += l.value + r.value - worst.value;
    err += l.error + r.error - worst.error;
    heap.push(l);
    heap.push(r);
    ++panels;
  }
  if (!out.converged && opt.throw_on_budget) {
    throw QuadratureError("adaptive quadrature did not reach tolerance within budget");
  }
  // recompute the sum from panels to shed accumulated cancellation
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  out.value = sum * sign;
  out.error = esum;
  return out;
}

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int m);

}  // namespace csturm
