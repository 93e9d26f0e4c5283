#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csturm/ivp.hpp"
#include "csturm/tails.hpp"

namespace csturm {

struct EndpointLimit {
  cd value{};
  bool exact = false;  // evaluated at a regular endpoint inside the span
  std::vector<double> xs;
  std::vector<cd> samples;
};

// Limit of h(x) as x approaches endpoint e through [lo, hi]: geometric in
// distance for finite e, geometric in magnitude for infinite e. Throws
// IndeterminateError (|h| samples as table) when the sequence does not settle.
EndpointLimit endpoint_limit(const std::function<cd(double)>& h, double lo, double hi, const Interval& iv, Endpoint e,
                             double tol = 1e-8);

EndpointLimit wronskian_at_endpoint(const SolutionTrajectory& f, const SolutionTrajectory& g, Endpoint e);

struct TailRecord {
  std::string label;
  TailVerdict verdict = TailVerdict::undecided;
  std::vector<double> shell_ends;
  std::vector<double> log10_partial;
  int renormalizations = 0;
  std::string note;
};

struct DimOptions {
  int max_shells = 40;
  std::size_t max_steps = 3000000;
  TailOptions tails{};
  OdeOptions ode{};
};

struct DimReport {
  int dim = 0;
  Endpoint endpoint = Endpoint::a;
  cd lambda{};
  std::string method;  // "regular", "semiregular" or "tails"
  std::vector<TailRecord> evidence;
  bool overflow = false;  // some solution passed the magnitude cap and was renormalized
};

DimReport dim_U_report(const Potential& p, Endpoint e, cd lambda = cd(0.0, 1.0), const DimOptions& opt = {});
int dim_U(const Potential& p, Endpoint e, cd lambda = cd(0.0, 1.0));

// 2 if dim_U(i) = 2, else 0. With check_second_lambda the value at 1+i
// must agree, otherwise IndeterminateError.
int boundary_index(const Potential& p, Endpoint e, bool check_second_lambda = false);

struct ClassificationReport {
  int nu_a = 0, nu_b = 0;
  int dim_Ua = 0, dim_Ub = 0;
  cd lambda{};
  DimReport a, b;
};
ClassificationReport classify(const Potential& p, cd lambda = cd(0.0, 1.0), const DimOptions& opt = {});

// Tails of ∫(φ|Aφ) = ∫|φ1|² for the four unit solutions of the 4x4 system,
// walking from the anchor toward e.
std::vector<TailRecord> quad_system_tails(const Potential& p, Endpoint e, cd lambda, const DimOptions& opt = {});

// f ↦ W_e(g, f). A regular vector (α0, α1) stands for g with (g, g')(e) = (α0, α1),
// i.e. the condition α0 f'(e) - α1 f(e) = 0.
class BoundaryFunctional {
public:
  static BoundaryFunctional regular(Endpoint e, cd a0, cd a1);
  static BoundaryFunctional trajectory(Endpoint e, SolutionTrajectory g);

  Endpoint endpoint() const { return e_; }
  bool is_regular_vector() const { return !rep_.has_value(); }
  const std::array<cd, 2>& vec() const { return vec_; }
  const SolutionTrajectory& rep() const { return *rep_; }

  cd apply(const SolutionTrajectory& f) const;

private:
  Endpoint e_ = Endpoint::a;
  std::array<cd, 2> vec_{};
  std::optional<SolutionTrajectory> rep_;
};

struct BoundarySpec {
  std::optional<BoundaryFunctional> at_a, at_b;
};

cd symplectic_form(const BoundaryFunctional& phi, const BoundaryFunctional& psi);

struct DissipativityReport {
  bool certified = false;
  std::string reason;
  SignProbe sign;
  std::optional<double> q_a, q_b;  // ⟦φ̄|φ⟧/2i at each end
};
DissipativityReport dissipativity_certificate(const Potential& p, const BoundarySpec& spec, std::uint64_t seed = 0,
                                              std::size_t probes = 1000);

// ⟨Lf|g⟩ - ⟨f|Lg⟩ - W_b(f,g) + W_a(f,g) on the common span.
cd greens_identity_residual(const SolutionTrajectory& f, const SolutionTrajectory& g);

}  // namespace csturm
