#pragma once

#include <string>

#include "lyap/sdp.hpp"

namespace lyap {

enum class SolveStatus { Feasible, Infeasible, Unknown };

std::string status_name(SolveStatus s);

struct SolveSettings {
  double eps_feas = 1e-7;    // strict feasibility iff max margin exceeds this
  double gap_tol = 1e-9;     // target bound on (max t) - (achieved t)
  double early_exit_margin = 0.0;  // >0: stop once the margin provably clears it
  int max_newton = 4000;
  double sigma0 = 1.0;
  double sigma_growth = 20.0;
  bool long_double_core = true;
};

// Result of maximizing the margin t over the box-normalized feasible set.
// margin is attained by `values`; margin_bound certifies max t <= margin_bound.
struct FeasibilityOutcome {
  SolveStatus status = SolveStatus::Unknown;
  double margin = 0.0;
  double margin_bound = 0.0;
  Eigen::VectorXd values;
  int newton_steps = 0;
  std::string diagnostics;
};

FeasibilityOutcome solve_feasibility(const SdpProblem& prob,
                                     const SolveSettings& settings = {});

}  // namespace lyap
