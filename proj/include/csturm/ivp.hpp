#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "csturm/dop853.hpp"
#include "csturm/potential.hpp"

namespace csturm {

using Rhs = std::function<cd(double)>;

// Piecewise-polynomial interpolant on Gauss-Legendre panels, used for the
// fixed-point (Volterra) pieces of a trajectory.
class PanelFunction {
public:
  PanelFunction() = default;
  PanelFunction(std::vector<double> edges, int m, std::vector<cd> f, std::vector<cd> fp);

  double lo() const { return edges_.front(); }
  double hi() const { return edges_.back(); }
  State<2> operator()(double x) const;
  const std::vector<double>& edges() const { return edges_; }
  std::vector<double> nodes() const;

private:
  std::vector<double> edges_;
  int m_ = 0;
  std::vector<double> ref_;   // reference nodes on [-1,1]
  std::vector<double> bary_;  // barycentric weights
  std::vector<cd> f_, fp_;
};

// Accepted RK steps with dense output, ordered by position.
template <std::size_t N>
class DenseTrack {
public:
  void add(const DenseStep<N>& s) { steps_.push_back(s); }
  // Arrange steps in increasing x; call once after integration.
  void finalize();
  bool empty() const { return steps_.empty(); }
  double lo() const { return edges_.front(); }
  double hi() const { return edges_.back(); }
  State<N> operator()(double x) const;
  const std::vector<double>& edges() const { return edges_; }
  std::vector<State<N>> edge_values() const;
  const std::vector<DenseStep<N>>& steps() const { return steps_; }
  // Append the steps of another track lying entirely on one side.
  void merge(const DenseTrack& other);

private:
  std::vector<DenseStep<N>> steps_;
  std::vector<double> edges_;
};

// Dense-output record of one solution of (L - λ) f = g.
class SolutionTrajectory {
public:
  struct Data {
    Potential potential;
    cd lambda{};
    Rhs g;  // empty for homogeneous
    double lo = 0.0, hi = 0.0;
    DenseTrack<2> track;
    std::vector<PanelFunction> panels;
    bool truncated = false;
    OdeStatus status = OdeStatus::ok;
  };

  explicit SolutionTrajectory(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

  const Potential& potential() const { return d_->potential; }
  cd lambda() const { return d_->lambda; }
  bool homogeneous() const { return !d_->g; }
  cd g(double x) const { return d_->g ? d_->g(x) : cd(0.0, 0.0); }
  double lo() const { return d_->lo; }
  double hi() const { return d_->hi; }
  bool contains(double x) const { return x >= d_->lo && x <= d_->hi; }
  bool truncated() const { return d_->truncated; }
  OdeStatus status() const { return d_->status; }

  State<2> eval(double x) const;
  cd f(double x) const { return eval(x)[0]; }
  cd df(double x) const { return eval(x)[1]; }
  // (L f)(x) = λ f(x) + g(x)
  cd L(double x) const { return d_->lambda * f(x) + g(x); }

  // Step boundaries and panel nodes, increasing.
  std::vector<double> mesh() const;

  // Scaled copy c·f (and c·g).
  SolutionTrajectory scaled(cd c) const;

  void write_csv(std::ostream& os, const std::vector<double>& xs) const;

  const Data& data() const { return *d_; }

private:
  std::shared_ptr<const Data> d_;
};

struct Span {
  double lo, hi;
};

// Default interior anchor point: midpoint, or one unit inside a finite end.
double default_anchor(const Interval& iv);

SolutionTrajectory solve_ivp(const Potential& p, cd lambda, double d, cd p0, cd p1, const Rhs& g, Span span,
                             const OdeOptions& opt = {}, std::vector<double> g_breaks = {});

// Solution with f(e) = 0, f'(e) = p1 at a semiregular endpoint e, continued
// by solve_ivp up to `reach` (default: the anchor of the interval).
SolutionTrajectory solve_semiregular(const Potential& p, cd lambda, Endpoint e, cd p1,
                                     std::optional<double> reach = std::nullopt, const OdeOptions& opt = {});

// Width of the window next to e on which ∫|(V-λ)(y-e)| dy <= 1/2.
double semiregular_window(const Potential& p, cd lambda, Endpoint e);

// G_d g on the window [w.lo, w.hi] ∋ d by the Neumann series f <- T_d g + Q_d f
// (with V - λ in place of V).
SolutionTrajectory neumann_solve(const Potential& p, double d, const Rhs& g, Span window, cd lambda = 0.0);

// max{∫_{a1}^d |(V-λ)(x-a1)|, ∫_d^{b1} |(V-λ)(x-b1)|}
double neumann_contraction_bound(const Potential& p, double d, Span window, cd lambda = 0.0);

cd wronskian(const SolutionTrajectory& u, const SolutionTrajectory& v, double x);
inline cd wronskian(const State<2>& u, const State<2>& v) { return u[0] * v[1] - u[1] * v[0]; }

// ∫_{x1}^{x2} ((Lu)v - u(Lv)) dx - (W(u,v;x2) - W(u,v;x1))
cd lagrange_residual(const SolutionTrajectory& u, const SolutionTrajectory& v, double x1, double x2);

// W(f,g)W(h,k) + W(g,h)W(f,k) + W(h,f)W(g,k)
cd kodaira_check(const std::array<State<2>, 4>& w);

// φ = (φ1, φ2, φ3, φ4) with J φ' = (λA + B) φ, i.e.
// φ1' = -φ3, φ2' = -φ4, φ3' = -V̄φ1 + φ2, φ4' = -λφ1 - Vφ2.
class QuadSystemTrajectory {
public:
  QuadSystemTrajectory(Potential p, cd lambda, DenseTrack<4> track, bool truncated)
      : p_(std::move(p)), lambda_(lambda), track_(std::move(track)), truncated_(truncated) {}
  State<4> eval(double x) const;
  double lo() const { return track_.lo(); }
  double hi() const { return track_.hi(); }
  cd lambda() const { return lambda_; }
  bool truncated() const { return truncated_; }
  std::vector<double> mesh() const { return track_.edges(); }
  // J φ'(x) - (λA + B) φ(x) using a centered difference of the dense output for φ'.
  State<4> residual(double x, double h) const;
  const Potential& potential() const { return p_; }

private:
  Potential p_;
  cd lambda_;
  DenseTrack<4> track_;
  bool truncated_;
};

// Right-hand side of the 4x4 system.
void quad_system_rhs(const Potential& p, cd lambda, double x, const State<4>& y, State<4>& dy);

QuadSystemTrajectory solve_quad_system(const Potential& p, cd lambda, double d, const State<4>& phi0, Span span,
                                       const OdeOptions& opt = {});

}  // namespace csturm
