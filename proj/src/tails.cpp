#include "csturm/tails.hpp"

#include <algorithm>
#include <cmath>

namespace csturm {

const char* to_string(TailVerdict v) {
  switch (v) {
    case TailVerdict::undecided: return "undecided";
    case TailVerdict::finite: return "finite";
    case TailVerdict::infinite: return "infinite";
  }
  return "?";
}

void TailSeries::push(double log_increment, double shell_end) {
  const double prev_inc = log_inc_.empty() ? -kInfLog : log_inc_.back();
  log_inc_.push_back(log_increment);
  log_sum_.push_back(log_add(log_total(), log_increment));
  ends_.push_back(shell_end);
  if (verdict_ != TailVerdict::undecided) return;

  const int n = static_cast<int>(log_inc_.size());
  if (n >= 2) flat_ = (log_increment >= prev_inc - 1e-12) ? flat_ + 1 : 0;
  if (n < opt_.min_shells) return;

  const int w = opt_.window;
  // growth only counts while increments are not shrinking, so a start-up
  // transient from a tiny first shell is not mistaken for divergence
  if (n > w && log_sum_[n - 1] - log_sum_[n - 1 - w] >= std::log(opt_.growth) && log_increment >= prev_inc) {
    verdict_ = TailVerdict::infinite;
    return;
  }
  if (flat_ >= opt_.flat_run) {
    verdict_ = TailVerdict::infinite;
    return;
  }
  if (n > w) {
    bool decaying = true;
    for (int i = n - w; i < n; ++i) {
      if (!(log_inc_[i] - log_inc_[i - 1] <= std::log(opt_.decay))) decaying = false;
    }
    if (decaying) verdict_ = TailVerdict::finite;
  }
}

namespace {

// Wynn's epsilon algorithm on s; returns the last even-column entry.
double wynn(const std::vector<double>& s) {
  std::vector<double> prev(s.size() + 1, 0.0), cur(s.begin(), s.end());
  double best = s.back();
  for (std::size_t col = 1; cur.size() > 1; ++col) {
    std::vector<double> next(cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      double diff = cur[i + 1] - cur[i];
      if (diff == 0.0) return best;
      next[i] = prev[i + 1] + 1.0 / diff;
    }
    prev = std::move(cur);
    cur = std::move(next);
    if (col % 2 == 0) best = cur.back();
  }
  return best;
}

}  // namespace

double TailSeries::log_extrapolated() const {
  const std::size_t n = log_inc_.size();
  if (n < 2) return log_total();
  double lr = log_inc_[n - 1] - log_inc_[n - 2];
  if (!(lr < 0.0)) return log_total();
  // partial sums relative to the current total, then Wynn over the last 7
  const std::size_t m = std::min<std::size_t>(n, 7);
  std::vector<double> s;
  for (std::size_t i = n - m; i < n; ++i) s.push_back(std::exp(log_sum_[i] - log_total()));
  if (m >= 3) {
    double w = wynn(s);
    if (std::isfinite(w) && w >= 1.0 && w < 1e6) return log_total() + std::log(w);
  }
  double r = std::exp(lr);
  return log_add(log_total(), log_inc_[n - 1] + std::log(r / (1.0 - r)));
}

std::vector<double> TailSeries::log10_partial_sums() const {
  std::vector<double> out;
  out.reserve(log_sum_.size());
  for (double v : log_sum_) out.push_back(v / std::log(10.0));
  return out;
}

ShellWalk::ShellWalk(double x0, double e, double q) : x0_(x0), e_(e), q_(q), finite_(std::isfinite(e)) {
  scale_ = finite_ ? x0 - e : std::max(1.0, std::abs(x0));
}

double ShellWalk::operator[](int k) const {
  if (k == 0) return x0_;
  if (finite_) return e_ + scale_ * std::ldexp(1.0, -k);
  double s = e_ > 0 ? 1.0 : -1.0;
  return s * std::max(1.0, s * x0_) * std::pow(q_, k);
}

bool ShellWalk::usable(int k) const {
  if (!finite_) return std::isfinite((*this)[k]) && std::abs((*this)[k]) < 1e300;
  double x = (*this)[k];
  return std::abs(x - e_) > 1e-13 * std::max(1.0, std::abs(e_)) && x != e_;
}

}  // namespace csturm
