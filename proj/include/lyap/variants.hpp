#pragma once

#include <vector>

#include "lyap/assemble.hpp"
#include "lyap/core.hpp"
#include "lyap/rate.hpp"

namespace lyap {

// Accelerated inner schedule: theta[0] = 1,
// theta[i+1] = (1 + sqrt(4 theta[i]^2 + 1)) / 2.
struct RestartSchedule {
  int n_inner = 0;
  std::vector<double> theta;  // theta[0..n_inner]
};

RestartSchedule momentum_sequence(int n_inner);

// Exact-line-search gradient descent: V on (x_k - x*, g_k) with value term,
// decrease certified with free multipliers on the search-orthogonality
// forms <g_{k+1}, x_{k+1} - x_k> and <g_{k+1}, g_k>.
AssembledSdp build_els_gd_sdp(const FunctionClass& fc, double rho);

// Exact-line-search heavy ball: step inside span{x_k - x_{k-1}, g_k}, V on
// (x_k - x*, x_{k-1} - x*, g_k, g_{k-1}) with two value terms; the
// orthogonality forms pair g_{k+1} with each spanning direction.
AssembledSdp build_els_hbm_sdp(const FunctionClass& fc, double rho);

// One accelerated cycle of n_inner gradient steps restarted from a
// momentum-free state; V on (y_0 - x*, g(y_0)) contracts by rho^{2 n_inner}
// per cycle, so rho is the per-gradient rate.
AssembledSdp build_restart_sdp(const FunctionClass& fc, const RestartSchedule& sched,
                               double rho);

RateCertificate bisect_els_gd_rate(const FunctionClass& fc, const BisectOptions& opts = {});
RateCertificate bisect_els_hbm_rate(const FunctionClass& fc, const BisectOptions& opts = {});

// Per-gradient rate of the restarted scheme at fixed period. The upper
// bracket is clamped to 1: the cycle weight rho^{2N} at larger rho wrecks
// the scaling and a restart certificate beyond 1 is meaningless anyway.
RateCertificate bisect_restart_rate(const FunctionClass& fc, int n_inner,
                                    const BisectOptions& opts = {});

struct RestartPlan {
  int n_star = 0;
  double rho_star = 0.0;
  std::vector<std::pair<int, RateCertificate>> per_n;  // every period examined
};

// Scans periods 1..n_max; ties in rho break toward the smaller period.
RestartPlan optimize_restart_period(const FunctionClass& fc, int n_max,
                                    const BisectOptions& opts = {});

}  // namespace lyap
