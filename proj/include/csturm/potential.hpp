#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csturm/expr.hpp"

namespace csturm {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Endpoint { a, b };

inline const char* to_string(Endpoint e) { return e == Endpoint::a ? "a" : "b"; }

struct Interval {
  double a = 0.0;
  double b = 1.0;

  Interval() = default;
  Interval(double lo, double hi);

  bool a_finite() const { return std::isfinite(a); }
  bool b_finite() const { return std::isfinite(b); }
  bool finite(Endpoint e) const { return e == Endpoint::a ? a_finite() : b_finite(); }
  double at(Endpoint e) const { return e == Endpoint::a ? a : b; }
  bool interior(double x) const { return x > a && x < b; }
};

struct EndpointMeta {
  bool regular = false;
  bool semiregular = false;
  bool probed = false;
  std::optional<bool> im_nonpositive_hint;
};

class Potential {
public:
  Potential(Interval iv, std::shared_ptr<const Expr> expr, std::string source);

  cd operator()(double x) const { return expr_->eval(x); }

  const Interval& interval() const { return iv_; }
  const Expr& expr() const { return *expr_; }
  const std::string& source() const { return source_; }
  const EndpointMeta& meta(Endpoint e) const { return e == Endpoint::a ? meta_a_ : meta_b_; }

  // Breakpoints strictly inside the interval.
  const std::vector<double>& breakpoints() const { return breaks_; }

  // Copy with endpoint metadata replaced; enforces regular => semiregular and
  // regular => finite.
  Potential with_meta(Endpoint e, const EndpointMeta& m) const;

private:
  Interval iv_;
  std::shared_ptr<const Expr> expr_;
  std::string source_;
  std::vector<double> breaks_;
  EndpointMeta meta_a_, meta_b_;
};

Potential parse_potential(std::string_view source, Interval iv);

enum class EndpointClass { regular, semiregular_only, neither };
const char* to_string(EndpointClass c);

struct ProbeOptions {
  double shell_ratio = 0.5;
  double agree_rel = 1e-8;
  int agree_count = 3;
  int max_shells = 400;
};

struct ProbeReport {
  EndpointClass cls = EndpointClass::neither;
  // extrapolated totals of ∫|V| and ∫|x-e||V| over the outermost shell radius
  double int_abs_v = kInf;
  double int_weighted_v = kInf;
  int shells = 0;
  std::vector<double> partial_abs;
  std::vector<double> partial_weighted;
};

ProbeReport probe_endpoint_report(const Potential& p, Endpoint which, const ProbeOptions& opt = {});
EndpointClass probe_endpoint(const Potential& p, Endpoint which);

// Potential with regular/semiregular flags filled in by probing both ends.
Potential probed(const Potential& p);

// Piecewise-constant potential on ]0,∞[ equal to c_p on J_p = ∪_k I_{p^k},
// I_n = ]n²-n, n²+n[, for the first `count` primes, 0 elsewhere. c_p runs
// through the complex rationals. Intervals I_n with n > max_n are omitted.
Potential pathological_potential(int count, std::int64_t max_n = 1000);

// c_p for the j-th prime (j = 0 for p = 2) as exact rational parts.
struct ComplexRational {
  std::int64_t re_num, re_den, im_num, im_den;
  cd value() const {
    return cd(static_cast<double>(re_num) / static_cast<double>(re_den),
              static_cast<double>(im_num) / static_cast<double>(im_den));
  }
};
ComplexRational complex_rational(std::int64_t index);

// Samples Im V on quasi-random interior probes plus the breakpoints (both sides).
struct SignProbe {
  bool all_nonpositive = true;
  double max_imag = -kInf;
  double worst_x = 0.0;
  std::size_t probes = 0;
};
SignProbe probe_im_nonpositive(const Potential& p, std::size_t n = 1000, std::uint64_t seed = 0,
                               double window_lo = -kInf, double window_hi = kInf);

}  // namespace csturm
