#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "csturm/dop853.hpp"
#include "csturm/error.hpp"
#include "csturm/expr.hpp"
#include "csturm/quadrature.hpp"

namespace csturm {

enum class TailVerdict { undecided, finite, infinite };
const char* to_string(TailVerdict v);

struct TailOptions {
  int window = 5;           // consecutive increment ratios checked
  double decay = 0.9;       // each ratio <= decay => finite
  double growth = 10.0;     // partial sum grows by this over `window` shells => infinite
  int flat_run = 8;         // increments non-decreasing this many shells in a row => infinite
  int min_shells = 6;
};

// Partial integrals over shells approaching an endpoint, held as natural
// logarithms so exponentially large solutions fit.
class TailSeries {
public:
  explicit TailSeries(TailOptions opt = {}) : opt_(opt) {}

  void push(double log_increment, double shell_end);
  TailVerdict verdict() const { return verdict_; }
  std::size_t size() const { return log_inc_.size(); }
  double log_total() const { return log_sum_.empty() ? -kInfLog : log_sum_.back(); }
  // Total with the tail estimated by Wynn's epsilon algorithm over the last
  // partial sums (geometric tail of the last ratio as fallback).
  double log_extrapolated() const;
  const std::vector<double>& shell_ends() const { return ends_; }
  const std::vector<double>& log_increments() const { return log_inc_; }
  const std::vector<double>& log_partial_sums() const { return log_sum_; }
  std::vector<double> log10_partial_sums() const;

  static constexpr double kInfLog = std::numeric_limits<double>::infinity();

private:
  TailOptions opt_;
  std::vector<double> log_inc_, log_sum_, ends_;
  TailVerdict verdict_ = TailVerdict::undecided;
  int flat_ = 0;
};

inline double log_add(double a, double b) {
  if (a == -TailSeries::kInfLog) return b;
  if (b == -TailSeries::kInfLog) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

// Integrates an ODE toward an endpoint, renormalizing the state whenever its
// magnitude passes `cap`, and accumulates log ∫ weight(x, y_true) dx where
// weight is quadratic in the state.
template <std::size_t N>
class LogRay {
public:
  template <class Rhs>
  LogRay(Rhs rhs, double x0, const State<N>& y0, std::vector<double> stops, OdeOptions opt, double cap = 1e100)
      : rhs_(std::move(rhs)), x_(x0), stops_(std::move(stops)), opt_(opt), cap_(cap) {
    double n = norm(y0);
    if (!(n > 0.0)) throw DomainError("zero initial data on ray");
    log_scale_ = std::log(n);
    for (std::size_t i = 0; i < N; ++i) y_[i] = y0[i] / n;
  }

  // Returns log ∫_{x}^{target} weight; advances x to target.
  template <class Weight>
  double advance(double target, Weight&& weight) {
    static const auto gl = gauss_legendre(8);
    double log_total = -TailSeries::kInfLog;
    while (x_ != target) {
      OdeOptions o = opt_;
      o.magnitude_cap = cap_;
      o.dense = true;
      if (h_ > 0.0) o.initial_step = h_;
      if (steps_ >= opt_.max_steps) throw IntegrationError("ray step budget exhausted at x = " + format_double(x_));
      o.max_steps = opt_.max_steps - steps_;
      double seg_sum = 0.0;
      auto res = integrate_ode<N>(
          [&](double x, const State<N>& y, State<N>& dy) { rhs_(x, y, dy); }, x_, y_, target, stops_, o,
          [&](const DenseStep<N>* ds, double xa, const State<N>&, double xb, const State<N>&) {
            double lo = std::min(xa, xb), hi = std::max(xa, xb), half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
            double s = 0.0;
            for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
              double x = mid + half * gl.nodes[k];
              s += gl.weights[k] * weight(x, (*ds)(x));
            }
            seg_sum += half * s;
            h_ = std::abs(xb - xa);
            ++steps_;
            return true;
          });
      if (res.status == OdeStatus::step_underflow || res.status == OdeStatus::budget) {
        throw IntegrationError("ray integration failed at x = " + format_double(res.x));
      }
      if (seg_sum > 0.0) log_total = log_add(log_total, std::log(seg_sum) + 2.0 * log_scale_);
      x_ = res.x;
      y_ = res.y;
      if (res.status == OdeStatus::overflow) {
        double n = norm(y_);
        log_scale_ += std::log(n);
        for (auto& c : y_) c /= n;
        ++renormalized_;
      }
    }
    return log_total;
  }

  double x() const { return x_; }
  // State divided by exp(log_scale()).
  const State<N>& state() const { return y_; }
  double log_scale() const { return log_scale_; }
  int renormalizations() const { return renormalized_; }
  std::size_t steps() const { return steps_; }

private:
  static double norm(const State<N>& y) {
    double n = 0.0;
    for (const auto& c : y) n = std::max(n, std::abs(c));
    return n;
  }

  std::function<void(double, const State<N>&, State<N>&)> rhs_;
  double x_;
  State<N> y_{};
  std::vector<double> stops_;
  OdeOptions opt_;
  double cap_;
  double log_scale_ = 0.0;
  double h_ = 0.0;
  int renormalized_ = 0;
  std::size_t steps_ = 0;
};

// Shell boundaries walking from x0 toward an endpoint e: geometric in
// distance (ratio 1/2) for finite e, geometric in magnitude (ratio q) for
// infinite e.
class ShellWalk {
public:
  ShellWalk(double x0, double e, double q = 1.5);
  double operator[](int k) const;
  // false once the boundary can no longer be represented distinctly from e.
  bool usable(int k) const;

private:
  double x0_, e_, q_, scale_;
  bool finite_;
};

}  // namespace csturm
