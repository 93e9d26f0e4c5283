#pragma once

#include <string>
#include <utility>
#include <vector>

#include "csturm/boundary.hpp"

namespace csturm {

// Disk of m with ∫_a^d |mu+v|² U <= Im m, U = Im(λ - V), for u = (1,0) and
// v = (0,-1) at a.
struct WeylDisk {
  double d = 0.0;
  cd center{};
  double radius = 0.0;
  double u_norm_sq = 0.0;  // ‖u‖²_U
  cd uv{};                 // ⟨u,v⟩_U = ∫ conj(u) v U
  double v_norm_sq = 0.0;  // ‖v‖²_U
  cd lambda{};

  // Radius from the circle equation coefficients, without using
  // |i/2 - ⟨u,v⟩|² - ‖u‖²‖v‖² = 1/4.
  double radius_from_coefficients() const;
  bool contains(cd m, double slack = 0.0) const { return std::abs(m - center) <= radius + slack; }
};

WeylDisk weyl_disk(const Potential& p, cd lambda, double d);

// The normalized pair (u, v) on [a, d].
std::pair<SolutionTrajectory, SolutionTrajectory> weyl_pair(const Potential& p, cd lambda, double d);

// ∫_{f.lo()}^{up_to} |f|² Im(λ - V)
double weighted_norm(const SolutionTrajectory& f, const Potential& p, cd lambda, double up_to);

enum class WeylCase { limit_point_one_L2, limit_point_all_L2, limit_circle };
const char* to_string(WeylCase c);

struct TrichotomyOptions {
  double q = 1.25;                    // trace ratio toward b
  double final_radius = 1e-8;         // keep tracing a limit point until the radius is below this
  double norm_cap = 1e30;             // ‖u‖²_U beyond this: radius numerically zero
  double stable_rel = 1e-6;           // limit-circle radius stabilization
  double positive_abs = 1e-8;
  int stable_window = 5;
  int max_trace = 80;
  std::size_t max_steps = 4000000;
  std::size_t shrink_steps = 400000;  // step allowance for shrinking after a limit point is found
  double nesting_slack = 1e-9;
};

struct TrichotomyReport {
  WeylCase kind = WeylCase::limit_point_one_L2;
  double limit_radius_estimate = 0.0;
  cd m_point_estimate{};
  double final_radius = 0.0;
  bool radius_stabilized = false;
  bool nesting_ok = true;
  int nesting_violations = 0;
  bool overflow_truncated = false;  // some solution exceeded the magnitude cap
  bool budget_exhausted = false;
  std::vector<WeylDisk> trace;
  std::vector<double> extrapolated_radii;
  TailVerdict norm_verdict = TailVerdict::undecided;
  DimReport dim;
};

TrichotomyReport trichotomy(const Potential& p, cd lambda, const TrichotomyOptions& opt = {});

}  // namespace csturm
