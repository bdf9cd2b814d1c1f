#include "lyap/variants.hpp"

#include <cmath>

namespace lyap {
namespace {

Eigen::RowVectorXd unit(int n, int i) { return Eigen::RowVectorXd::Unit(n, i); }

void add_P_p(SdpProblem& prob, ProblemLayout& lay, int state_dim, int p_dim) {
  lay.state_dim = state_dim;
  lay.p_dim = p_dim;
  for (int r = 0; r < state_dim; ++r)
    for (int c = r; c < state_dim; ++c)
      lay.P_idx.push_back(prob.add_var(
          "P[" + std::to_string(r) + "][" + std::to_string(c) + "]", VarKind::Free));
  for (int r = 0; r < p_dim; ++r)
    lay.p_idx.push_back(prob.add_var("p[" + std::to_string(r) + "]", VarKind::Free));
}

void add_negated(MatrixExpr& dst, const MatrixExpr& src) {
  for (const auto& [a, F] : src.terms) dst.add(a, -F);
}

void add_negated(VectorExpr& dst, const VectorExpr& src) {
  for (const auto& [a, c] : src.terms) dst.add(a, -c);
}

Eigen::MatrixXd stack_rows(const std::vector<Eigen::RowVectorXd>& rows) {
  Eigen::MatrixXd S(static_cast<int>(rows.size()), rows[0].cols());
  for (int r = 0; r < S.rows(); ++r) S.row(r) = rows[static_cast<size_t>(r)];
  return S;
}

// S^T ker S for a symmetric kernel; used for the zero-valued quadratic
// forms that encode exact-line-search stationarity.
Eigen::MatrixXd plane_form(const std::vector<Eigen::RowVectorXd>& rows,
                           const Eigen::MatrixXd& ker) {
  const Eigen::MatrixXd S = stack_rows(rows);
  return S.transpose() * ker * S;
}

Eigen::Matrix3d cross_kernel() {
  Eigen::Matrix3d k;
  k << 0, 0, -1, 0, 0, 1, -1, 1, 0;  // <row3, row2 - row1>
  return k;
}

Eigen::Matrix2d dot_kernel() {
  Eigen::Matrix2d k;
  k << 0, 1, 1, 0;  // <row1, row2>
  return k;
}

// Two-point workspace (x_0 - x*, g_0) with a single value coordinate;
// doubles as the cycle-start state of the restarted scheme.
BasisWorkspace point_ws() {
  BasisWorkspace ws;
  ws.N = 0;
  ws.K = 0;
  ws.cols = 2;
  ws.fcols = 1;
  ws.rolled = true;
  ws.xbar = {unit(2, 0)};
  ws.ybar = {unit(2, 0)};
  ws.gbar = {unit(2, 1)};
  ws.fbar = {unit(1, 0)};
  return ws;
}

// Two iterates with free step between them: x_0, x_1 independent
// directions, gradients evaluated at the iterates.
BasisWorkspace pair_ws() {
  BasisWorkspace ws;
  ws.N = 0;
  ws.K = 1;
  ws.cols = 4;
  ws.fcols = 2;
  ws.rolled = true;
  ws.xbar = {unit(4, 0), unit(4, 1)};
  ws.ybar = ws.xbar;
  ws.gbar = {unit(4, 2), unit(4, 3)};
  ws.fbar = {unit(2, 0), unit(2, 1)};
  return ws;
}

// Iterates x_0..x_2 as independent directions, gradients at the iterates.
BasisWorkspace triple_ws() {
  BasisWorkspace ws;
  ws.N = 0;
  ws.K = 2;
  ws.cols = 6;
  ws.fcols = 3;
  ws.rolled = true;
  ws.xbar = {unit(6, 0), unit(6, 1), unit(6, 2)};
  ws.ybar = ws.xbar;
  ws.gbar = {unit(6, 3), unit(6, 4), unit(6, 5)};
  ws.fbar = {unit(3, 0), unit(3, 1), unit(3, 2)};
  return ws;
}

void check_inputs(const FunctionClass& fc, double rho) {
  if (!fc.valid()) throw SpecError("invalid function class");
  if (rho < 0.0) throw SpecError("rho must be nonnegative");
}

}  // namespace

RestartSchedule momentum_sequence(int n_inner) {
  if (n_inner < 0) throw SpecError("restart period must be nonnegative");
  RestartSchedule s;
  s.n_inner = n_inner;
  s.theta.push_back(1.0);
  for (int i = 0; i < n_inner; ++i) {
    const double t = s.theta.back();
    s.theta.push_back(0.5 * (1.0 + std::sqrt(4.0 * t * t + 1.0)));
  }
  return s;
}

AssembledSdp build_els_gd_sdp(const FunctionClass& fc, double rho) {
  check_inputs(fc, rho);
  const FunctionClass fcn{fc.mu / fc.L, 1.0};

  AssembledSdp out;
  SdpProblem& prob = out.prob;
  ProblemLayout& lay = out.layout;
  add_P_p(prob, lay, 2, 1);

  const BasisWorkspace ws0 = point_ws();
  MatrixExpr V0 = quad_form_expr(stack_rows({ws0.y(0), ws0.g(0)}), lay.P_idx, 2, 1.0);
  VectorExpr v0 = linear_form_expr(stack_rows({ws0.f(0)}), lay.p_idx, 1.0);
  lay.lambda_idx = certify_sign(prob, ws0, fcn, std::move(V0), std::move(v0),
                                Sense::PositiveDefinite, "lambda");

  const BasisWorkspace ws1 = pair_ws();
  MatrixExpr dV =
      quad_form_expr(stack_rows({ws1.x(1), ws1.g(1)}), lay.P_idx, 2, 1.0);
  add_negated(dV, quad_form_expr(stack_rows({ws1.x(0), ws1.g(0)}), lay.P_idx, 2,
                                 rho * rho));
  VectorExpr dv = linear_form_expr(stack_rows({ws1.f(1)}), lay.p_idx, 1.0);
  add_negated(dv, linear_form_expr(stack_rows({ws1.f(0)}), lay.p_idx, rho * rho));

  // Exact line search: the next gradient annihilates both the step taken
  // and the previous gradient; the multipliers on these zero forms are free.
  lay.nu_idx.push_back(prob.add_var("nu[0]", VarKind::Free));
  dV.add(lay.nu_idx[0], plane_form({ws1.x(0), ws1.x(1), ws1.g(1)}, cross_kernel()));
  lay.nu_idx.push_back(prob.add_var("nu[1]", VarKind::Free));
  dV.add(lay.nu_idx[1], plane_form({ws1.g(0), ws1.g(1)}, dot_kernel()));

  lay.eta_idx = certify_sign(prob, ws1, fcn, std::move(dV), std::move(dv),
                             Sense::NegativeSemidefinite, "eta");
  return out;
}

AssembledSdp build_els_hbm_sdp(const FunctionClass& fc, double rho) {
  check_inputs(fc, rho);
  const FunctionClass fcn{fc.mu / fc.L, 1.0};

  AssembledSdp out;
  SdpProblem& prob = out.prob;
  ProblemLayout& lay = out.layout;
  add_P_p(prob, lay, 4, 2);

  const BasisWorkspace ws1 = pair_ws();
  MatrixExpr V1 = quad_form_expr(
      stack_rows({ws1.x(1), ws1.x(0), ws1.g(1), ws1.g(0)}), lay.P_idx, 4, 1.0);
  VectorExpr v1 = linear_form_expr(stack_rows({ws1.f(1), ws1.f(0)}), lay.p_idx, 1.0);
  lay.lambda_idx = certify_sign(prob, ws1, fcn, std::move(V1), std::move(v1),
                                Sense::PositiveDefinite, "lambda");

  const BasisWorkspace ws2 = triple_ws();
  MatrixExpr dV = quad_form_expr(
      stack_rows({ws2.x(2), ws2.x(1), ws2.g(2), ws2.g(1)}), lay.P_idx, 4, 1.0);
  add_negated(dV, quad_form_expr(stack_rows({ws2.x(1), ws2.x(0), ws2.g(1), ws2.g(0)}),
                                 lay.P_idx, 4, rho * rho));
  VectorExpr dv = linear_form_expr(stack_rows({ws2.f(2), ws2.f(1)}), lay.p_idx, 1.0);
  add_negated(dv,
              linear_form_expr(stack_rows({ws2.f(1), ws2.f(0)}), lay.p_idx, rho * rho));

  // g_{k+1} annihilates span{x_{k+1} - x_k, x_k - x_{k-1}} and g_k. The
  // backward difference at k = 0 would reach outside the window, so only
  // k = 1 carries it (at k = 0 the step direction is g_0 anyway).
  for (int k = 0; k <= 1; ++k) {
    const int v = prob.add_var("nu[" + std::to_string(k) + "]", VarKind::Free);
    dV.add(v, plane_form({ws2.x(k), ws2.x(k + 1), ws2.g(k + 1)}, cross_kernel()));
    lay.nu_idx.push_back(v);
  }
  {
    const int v = prob.add_var("nu[2]", VarKind::Free);
    dV.add(v, plane_form({ws2.x(0), ws2.x(1), ws2.g(2)}, cross_kernel()));
    lay.nu_idx.push_back(v);
  }
  for (int k = 0; k <= 1; ++k) {
    const int v = prob.add_var("nu[" + std::to_string(3 + k) + "]", VarKind::Free);
    dV.add(v, plane_form({ws2.g(k), ws2.g(k + 1)}, dot_kernel()));
    lay.nu_idx.push_back(v);
  }

  lay.eta_idx = certify_sign(prob, ws2, fcn, std::move(dV), std::move(dv),
                             Sense::NegativeSemidefinite, "eta");
  return out;
}

AssembledSdp build_restart_sdp(const FunctionClass& fc, const RestartSchedule& sched,
                               double rho) {
  check_inputs(fc, rho);
  const int N = sched.n_inner;
  if (N < 1) throw SpecError("restart period must be positive");
  if (static_cast<int>(sched.theta.size()) != N + 1)
    throw SpecError("schedule length does not match period");
  const FunctionClass fcn{fc.mu / fc.L, 1.0};

  AssembledSdp out;
  SdpProblem& prob = out.prob;
  ProblemLayout& lay = out.layout;
  add_P_p(prob, lay, 2, 1);

  const BasisWorkspace ws0 = point_ws();
  MatrixExpr V0 = quad_form_expr(stack_rows({ws0.y(0), ws0.g(0)}), lay.P_idx, 2, 1.0);
  VectorExpr v0 = linear_form_expr(stack_rows({ws0.f(0)}), lay.p_idx, 1.0);
  lay.lambda_idx = certify_sign(prob, ws0, fcn, std::move(V0), std::move(v0),
                                Sense::PositiveDefinite, "lambda");

  // One cycle: gradients taken at y_0..y_N, interim iterates eliminated.
  // With L normalized to 1 the inner step is exactly one gradient.
  BasisWorkspace ws;
  ws.N = 0;
  ws.K = N;
  ws.cols = N + 2;
  ws.fcols = N + 1;
  ws.rolled = true;
  ws.xbar = {unit(N + 2, 0)};
  for (int k = 0; k <= N; ++k) ws.gbar.push_back(unit(N + 2, 1 + k));
  for (int k = 0; k <= N; ++k) ws.fbar.push_back(unit(N + 1, k));
  ws.ybar.assign(N + 1, Eigen::RowVectorXd::Zero(N + 2));
  ws.ybar[0] = ws.x(0);
  std::vector<Eigen::RowVectorXd> zbar(N + 1, Eigen::RowVectorXd::Zero(N + 2));
  zbar[0] = ws.x(0);
  for (int i = 0; i < N; ++i) {
    zbar[i + 1] = ws.y(i) - ws.g(i);
    const double m = (sched.theta[i] - 1.0) / sched.theta[i + 1];
    ws.ybar[i + 1] = zbar[i + 1] + m * (zbar[i + 1] - zbar[i]);
  }

  const double w = std::pow(rho, 2 * N);
  MatrixExpr dV = quad_form_expr(stack_rows({ws.y(N), ws.g(N)}), lay.P_idx, 2, 1.0);
  add_negated(dV, quad_form_expr(stack_rows({ws.y(0), ws.g(0)}), lay.P_idx, 2, w));
  VectorExpr dv = linear_form_expr(stack_rows({ws.f(N)}), lay.p_idx, 1.0);
  add_negated(dv, linear_form_expr(stack_rows({ws.f(0)}), lay.p_idx, w));
  lay.eta_idx = certify_sign(prob, ws, fcn, std::move(dV), std::move(dv),
                             Sense::NegativeSemidefinite, "eta");
  return out;
}

namespace {

RateCertificate finish_variant(BisectResult res, const std::string& kind,
                               const FunctionClass& fc, const BisectOptions& opts) {
  RateCertificate rc;
  rc.rho_star = res.rho_star;
  rc.bracket_history = std::move(res.history);
  rc.certificate = extract_certificate(res.assembled, res.outcome.values);
  rc.certificate.kind = kind;
  rc.certificate.rho = res.rho_star;
  rc.certificate.fc = fc;
  rc.certificate.margin = res.outcome.margin;
  rc.certificate.solver_gap = res.outcome.margin_bound - res.outcome.margin;
  rc.certificate.newton_steps = res.outcome.newton_steps;
  rc.certificate.eps_feas = opts.solve.eps_feas;
  return rc;
}

}  // namespace

RateCertificate bisect_els_gd_rate(const FunctionClass& fc, const BisectOptions& opts) {
  BisectResult res = bisect_feasible_rate(
      [&](double rho) { return build_els_gd_sdp(fc, rho); }, opts);
  return finish_variant(std::move(res), "els-gd", fc, opts);
}

RateCertificate bisect_els_hbm_rate(const FunctionClass& fc, const BisectOptions& opts) {
  BisectResult res = bisect_feasible_rate(
      [&](double rho) { return build_els_hbm_sdp(fc, rho); }, opts);
  return finish_variant(std::move(res), "els-hbm", fc, opts);
}

RateCertificate bisect_restart_rate(const FunctionClass& fc, int n_inner,
                                    const BisectOptions& opts) {
  const RestartSchedule sched = momentum_sequence(n_inner);
  BisectOptions clamped = opts;
  clamped.rho_max = std::min(opts.rho_max, 1.0);
  // No first-order method beats (sqrt(kappa)-1)/(sqrt(kappa)+1) per gradient
  // call on this class, so rates below that floor are never certifiable;
  // probing them only drives the cycle weight rho^{2N} into degeneracy.
  const double rk = std::sqrt(fc.kappa());
  clamped.rho_min = std::max(opts.rho_min, 0.999 * (rk - 1.0) / (rk + 1.0));
  // One cycle contributes N+3 multipliers per pair; at N = 20 the extended
  // core costs minutes where the vectorized one takes seconds.
  clamped.solve.long_double_core = false;
  BisectResult res = bisect_feasible_rate(
      [&](double rho) { return build_restart_sdp(fc, sched, rho); }, clamped);
  RateCertificate rc = finish_variant(std::move(res), "restart", fc, clamped);
  rc.certificate.n_inner = n_inner;
  return rc;
}

RestartPlan optimize_restart_period(const FunctionClass& fc, int n_max,
                                    const BisectOptions& opts) {
  if (n_max < 1) throw SpecError("n_max must be positive");
  RestartPlan plan;
  for (int n = 1; n <= n_max; ++n) {
    RateCertificate rc = bisect_restart_rate(fc, n, opts);
    if (plan.n_star == 0 || rc.rho_star < plan.rho_star) {
      plan.n_star = n;
      plan.rho_star = rc.rho_star;
    }
    plan.per_n.emplace_back(n, std::move(rc));
  }
  return plan;
}

}  // namespace lyap
