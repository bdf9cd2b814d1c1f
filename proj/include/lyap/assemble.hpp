#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "lyap/basis.hpp"
#include "lyap/core.hpp"
#include "lyap/interp.hpp"
#include "lyap/sdp.hpp"

namespace lyap {

// Stacked selector rows for the method state at iteration k:
// X rows are xbar[k], xbar[k-1], ..., xbar[k-N] (G and F analogous).
struct StateSelectors {
  Eigen::MatrixXd X;  // (N+1) x (N+K+2)
  Eigen::MatrixXd G;  // (N+1) x (N+K+2)
  Eigen::MatrixXd F;  // (N+1) x (K+1)
};

StateSelectors state_selectors(const BasisWorkspace& ws, int k);

// V = [X;G]^T P [X;G] as a linear map of P's upper triangle; v = p^T F.
// P variable indices are row-major upper triangle over the given state
// dimension; p indices follow.
MatrixExpr quad_form_expr(const Eigen::MatrixXd& U, const std::vector<int>& P_idx,
                          int state_dim, double scale);
VectorExpr linear_form_expr(const Eigen::MatrixXd& F, const std::vector<int>& p_idx,
                            double scale);

enum class Sense { PositiveDefinite, NegativeSemidefinite, PositiveSemidefinite };

// Emit the multiplier-combined sign certificate for an affine quadratic
// (Q_expr, q_expr) over the points indexed by ws: fresh nonnegative
// multipliers tau_ij over ordered pairs of I_K combine the interpolation
// pairs; PositiveDefinite adds (Q - sum tau M >= t I, q - sum tau m >= t 1),
// NegativeSemidefinite adds (Q + sum tau M <= 0, q + sum tau m <= 0).
// Returns the (pair, var) bookkeeping. Empty result when skip_multipliers.
std::vector<std::pair<PairKey, int>> certify_sign(
    SdpProblem& prob, const BasisWorkspace& ws, const FunctionClass& fc,
    MatrixExpr Q_expr, VectorExpr q_expr, Sense sense,
    const std::string& mult_name, bool skip_multipliers = false);

enum class Restriction { None, LambdaZero, PosDefShape };

Restriction restriction_from_name(const std::string& name);
std::string restriction_name(Restriction r);

// Feasibility program certifying rate rho for the method: positive
// definiteness of V over I_N and decrease of V_{N+1} - rho^2 V_N over
// I_{N+1}, with shared (P, p). Data is normalized to L = 1 internally
// (alpha -> alpha L); certificate values refer to the normalized class.
AssembledSdp build_rho_sdp(const MethodSpec& spec, const FunctionClass& fc,
                           double rho, Restriction mode = Restriction::None);

}  // namespace lyap
