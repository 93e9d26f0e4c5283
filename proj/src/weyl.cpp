#include "csturm/weyl.hpp"

#include <algorithm>
#include <cmath>

#include "csturm/error.hpp"

namespace csturm {

const char* to_string(WeylCase c) {
  switch (c) {
    case WeylCase::limit_point_one_L2: return "limit_point_one_L2";
    case WeylCase::limit_point_all_L2: return "limit_point_all_L2";
    case WeylCase::limit_circle: return "limit_circle";
  }
  return "?";
}

double WeylDisk::radius_from_coefficients() const {
  // N|m|² + 2 Re(m̄ (P - i/2)) + Q = 0 written as |m - c|² = ρ²
  cd b = uv - cd(0.0, 0.5);
  double rho2 = std::norm(b) / (u_norm_sq * u_norm_sq) - v_norm_sq / u_norm_sq;
  return std::sqrt(std::max(rho2, 0.0));
}

namespace {

void require_setup(const Potential& p, cd lambda) {
  if (!(lambda.imag() > 0.0)) throw DomainError("Weyl disks need Im lambda > 0");
  const Interval& iv = p.interval();
  if (!iv.a_finite()) throw DomainError("Weyl disks need a regular endpoint a");
  auto cls = p.meta(Endpoint::a).probed ? (p.meta(Endpoint::a).regular ? EndpointClass::regular
                                                                         : EndpointClass::neither)
                                        : probe_endpoint(p, Endpoint::a);
  if (cls != EndpointClass::regular) throw DomainError("Weyl disks need a regular endpoint a");
  auto sp = probe_im_nonpositive(p);
  if (!sp.all_nonpositive) {
    throw DomainError("Im V > 0 at x = " + format_double(sp.worst_x) + "; Weyl disks need Im V <= 0");
  }
}

WeylDisk make_disk(double d, double N, cd P, double Q, cd lambda) {
  if (!(N > 1e-300)) throw DomainError("weighted norm of u below underflow threshold");
  WeylDisk w;
  w.d = d;
  w.u_norm_sq = N;
  w.uv = P;
  w.v_norm_sq = Q;
  w.lambda = lambda;
  w.center = (cd(0.0, 0.5) - P) / N;
  w.radius = 1.0 / (2.0 * N);
  return w;
}

// (u, u', v, v') from a with u = (1,0), v = (0,-1), accumulating the
// U-weighted Gram entries step by step.
class PairIntegrator {
public:
  PairIntegrator(const Potential& p, cd lambda) : p_(p), lambda_(lambda), x_(p.interval().a) {
    y_ = {1.0, 0.0, 0.0, -1.0};
  }

  // ramp: weight 1 - (x - ramp_x0)/ramp_len is applied to the Gram increments
  OdeStatus advance(double target, std::size_t budget, double ramp_x0 = 0.0, double ramp_len = 0.0) {
    static const auto gl = gauss_legendre(8);
    OdeOptions o;
    o.dense = true;
    o.max_steps = budget;
    if (h_ > 0.0) o.initial_step = h_;
    auto rhs = [this](double x, const State<4>& y, State<4>& dy) {
      cd q = p_(x) - lambda_;
      dy[0] = y[1];
      dy[1] = q * y[0];
      dy[2] = y[3];
      dy[3] = q * y[2];
    };
    auto res = integrate_ode<4>(rhs, x_, y_, target, p_.breakpoints(), o,
                                [&](const DenseStep<4>* ds, double xa, const State<4>&, double xb, const State<4>&) {
                                  double half = 0.5 * (xb - xa), mid = 0.5 * (xa + xb);
                                  for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
                                    double x = mid + half * gl.nodes[k];
                                    auto y = (*ds)(x);
                                    double U = (lambda_ - p_(x)).imag();
                                    if (U < -1e-12 * (1.0 + std::abs(lambda_))) {
                                      throw DomainError("negative weight Im(lambda - V) at x = " + format_double(x));
                                    }
                                    double w = gl.weights[k] * half * U;
                                    if (ramp_len > 0.0) w *= 1.0 - (x - ramp_x0) / ramp_len;
                                    N_ += w * std::norm(y[0]);
                                    P_ += w * std::conj(y[0]) * y[2];
                                    Q_ += w * std::norm(y[2]);
                                  }
                                  h_ = std::abs(xb - xa);
                                  ++steps_;
                                  return true;
                                });
    x_ = res.x;
    y_ = res.y;
    return res.status;
  }

  double x() const { return x_; }
  double N() const { return N_; }
  cd P() const { return P_; }
  double Q() const { return Q_; }
  std::size_t steps() const { return steps_; }

private:
  const Potential& p_;
  cd lambda_;
  double x_;
  State<4> y_;
  double h_ = 0.0;
  double N_ = 0.0, Q_ = 0.0;
  cd P_{};
  std::size_t steps_ = 0;
};

// Mean of ‖u‖²_U(s) over one local period of |u|² after d where solutions
// oscillate (|Re k| > |Im k| for k = sqrt(λ - V(d))); otherwise ‖u‖²_U(d).
// Removes the boundary term of the oscillating part from the trace.
double period_averaged_norm(const PairIntegrator& pi, const Potential& p, cd lambda, double d, const Interval& iv) {
  cd k = std::sqrt(lambda - p(d));
  if (!(std::abs(k.real()) > std::abs(k.imag()))) return pi.N();
  double T = M_PI / std::abs(k.real());
  if (!(d + T < iv.b)) return pi.N();
  PairIntegrator side = pi;
  if (side.advance(d + T, 200000, d, T) != OdeStatus::ok) return pi.N();
  return side.N();
}

}  // namespace

WeylDisk weyl_disk(const Potential& p, cd lambda, double d) {
  require_setup(p, lambda);
  const Interval& iv = p.interval();
  if (!(d > iv.a && d <= iv.b && std::isfinite(d))) throw DomainError("truncation point outside ]a, b]");
  if (d == iv.b && probe_endpoint(p, Endpoint::b) != EndpointClass::regular) {
    throw DomainError("truncation at a non-regular endpoint b");
  }
  PairIntegrator pi(p, lambda);
  auto st = pi.advance(d, 4000000);
  if (st != OdeStatus::ok) throw IntegrationError(std::string("Weyl pair integration: ") + to_string(st));
  return make_disk(d, pi.N(), pi.P(), pi.Q(), lambda);
}

std::pair<SolutionTrajectory, SolutionTrajectory> weyl_pair(const Potential& p, cd lambda, double d) {
  const double a = p.interval().a;
  auto u = solve_ivp(p, lambda, a, 1.0, 0.0, {}, Span{a, d});
  auto v = solve_ivp(p, lambda, a, 0.0, -1.0, {}, Span{a, d});
  return {u, v};
}

double weighted_norm(const SolutionTrajectory& f, const Potential& p, cd lambda, double up_to) {
  if (!(up_to >= f.lo() && up_to <= f.hi())) throw DomainError("weighted_norm: upper limit outside span");
  auto mesh = f.mesh();
  double min_w = 0.0;
  auto integrand = [&](double x) {
    double U = (lambda - p(x)).imag();
    min_w = std::min(min_w, U);
    return std::norm(f.f(x)) * U;
  };
  QuadOptions q;
  q.rel_tol = 1e-11;
  double r = integrate(integrand, f.lo(), up_to, mesh, q).value;
  if (min_w < -1e-12 * (1.0 + std::abs(lambda))) throw DomainError("negative weight Im(lambda - V) detected");
  return r;
}

TrichotomyReport trichotomy(const Potential& p, cd lambda, const TrichotomyOptions& opt) {
  require_setup(p, lambda);
  const Interval& iv = p.interval();
  TrichotomyReport rep;
  ShellWalk walk(iv.a, iv.b, opt.q);
  TailSeries ts;
  PairIntegrator pi(p, lambda);
  bool limit_point = false;
  double prev_N = 0.0;
  std::size_t steps_at_decision = 0;

  for (int k = 1; k <= opt.max_trace && walk.usable(k); ++k) {
    const double d = walk[k];
    if (pi.steps() >= opt.max_steps) {
      rep.budget_exhausted = true;
      break;
    }
    auto st = pi.advance(d, opt.max_steps - pi.steps());
    if (st == OdeStatus::budget) {
      rep.budget_exhausted = true;
      break;
    }
    if (st == OdeStatus::overflow) {
      rep.overflow_truncated = true;
      break;
    }
    if (st != OdeStatus::ok) throw IntegrationError(std::string("Weyl trace integration: ") + to_string(st));

    auto disk = make_disk(d, pi.N(), pi.P(), pi.Q(), lambda);
    double N_avg = period_averaged_norm(pi, p, lambda, d, iv);
    if (!rep.trace.empty()) {
      const auto& prev = rep.trace.back();
      // centers carry the integrator's relative error, so radii far below
      // |c| cannot be resolved against each other
      double slack = opt.nesting_slack * (prev.radius + std::abs(prev.center));
      if (!(std::abs(disk.center - prev.center) + disk.radius < prev.radius + slack)) {
        rep.nesting_ok = false;
        ++rep.nesting_violations;
      }
    }
    rep.trace.push_back(disk);
    double inc = N_avg - prev_N;
    prev_N = N_avg;
    ts.push(inc > 0.0 ? std::log(inc) : -TailSeries::kInfLog, d);

    if (!limit_point && (pi.N() > opt.norm_cap || ts.verdict() == TailVerdict::infinite)) {
      limit_point = true;
      steps_at_decision = pi.steps();
    }
    if (limit_point) {
      if (disk.radius < opt.final_radius || pi.N() > opt.norm_cap) break;
      if (pi.steps() - steps_at_decision > opt.shrink_steps) break;
      continue;
    }
    if (ts.verdict() == TailVerdict::finite) {
      double r_ext = 0.5 * std::exp(-ts.log_extrapolated());
      rep.extrapolated_radii.push_back(r_ext);
      const auto& er = rep.extrapolated_radii;
      const int w = opt.stable_window;
      if (static_cast<int>(er.size()) >= w) {
        bool stable = r_ext > opt.positive_abs;
        for (std::size_t i = er.size() - w + 1; i < er.size(); ++i) {
          if (!(std::abs(er[i] - er[i - 1]) < opt.stable_rel * er[i])) stable = false;
        }
        if (stable) {
          rep.radius_stabilized = true;
          break;
        }
      }
    }
  }
  if (rep.trace.empty()) throw DomainError("Weyl trace produced no disks");
  rep.norm_verdict = ts.verdict();
  rep.final_radius = rep.trace.back().radius;
  rep.m_point_estimate = rep.trace.back().center;

  if (!limit_point && ts.verdict() != TailVerdict::finite) {
    std::vector<double> radii;
    for (const auto& t : rep.trace) radii.push_back(t.radius);
    throw IndeterminateError("Weyl disk trace undetermined (radii)", radii);
  }
  rep.dim = dim_U_report(p, Endpoint::b, lambda);
  rep.overflow_truncated = rep.overflow_truncated || rep.dim.overflow;
  if (limit_point) {
    rep.limit_radius_estimate = 0.0;
    rep.kind = rep.dim.dim == 2 ? WeylCase::limit_point_all_L2 : WeylCase::limit_point_one_L2;
  } else {
    rep.kind = WeylCase::limit_circle;
    rep.limit_radius_estimate = rep.extrapolated_radii.empty() ? rep.final_radius : rep.extrapolated_radii.back();
  }
  return rep;
}

}  // namespace csturm
