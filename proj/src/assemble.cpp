#include "lyap/assemble.hpp"

namespace lyap {

std::string pair_token(int id) {
  return id == BasisWorkspace::kStarIndex ? "star" : std::to_string(id);
}

StateSelectors state_selectors(const BasisWorkspace& ws, int k) {
  if (!ws.rolled) throw SpecError("workspace not rolled");
  // g and f rows exist only through the horizon, so full selectors stop at K
  // even though xbar[K+1] is available.
  if (k < ws.N || k > ws.K) throw SpecError("selector index out of range");
  StateSelectors sel;
  const int n = ws.N + 1;
  sel.X.resize(n, ws.dim());
  sel.G.resize(n, ws.dim());
  sel.F.resize(n, ws.K + 1);
  for (int r = 0; r < n; ++r) {
    sel.X.row(r) = ws.x(k - r);
    sel.G.row(r) = ws.g(k - r);
    sel.F.row(r) = ws.f(k - r);
  }
  return sel;
}

MatrixExpr quad_form_expr(const Eigen::MatrixXd& U, const std::vector<int>& P_idx,
                          int state_dim, double scale) {
  MatrixExpr expr(static_cast<int>(U.cols()));
  int k = 0;
  for (int r = 0; r < state_dim; ++r) {
    for (int c = r; c < state_dim; ++c, ++k) {
      Eigen::MatrixXd coeff = U.row(r).transpose() * U.row(c);
      if (r != c) coeff += U.row(c).transpose() * U.row(r);
      expr.add(P_idx[k], scale * coeff);
    }
  }
  return expr;
}

VectorExpr linear_form_expr(const Eigen::MatrixXd& F, const std::vector<int>& p_idx,
                            double scale) {
  VectorExpr expr(static_cast<int>(F.cols()));
  for (int r = 0; r < static_cast<int>(p_idx.size()); ++r)
    expr.add(p_idx[r], scale * F.row(r).transpose());
  return expr;
}

std::vector<std::pair<PairKey, int>> certify_sign(
    SdpProblem& prob, const BasisWorkspace& ws, const FunctionClass& fc,
    MatrixExpr Q_expr, VectorExpr q_expr, Sense sense,
    const std::string& mult_name, bool skip_multipliers) {
  std::vector<std::pair<PairKey, int>> mults;
  const InterpKernel kernel = interpolation_kernel(fc);
  const double sgn = (sense == Sense::NegativeSemidefinite) ? 1.0 : -1.0;
  if (!skip_multipliers) {
    for (int i : ws.index_set()) {
      for (int j : ws.index_set()) {
        if (i == j) continue;
        const InterpPair pair = interpolation_pair(ws, kernel, fc, i, j);
        const int v = prob.add_var(
            mult_name + "[" + pair_token(i) + "][" + pair_token(j) + "]",
            VarKind::Nonneg);
        Q_expr.add(v, sgn * pair.Mij);
        q_expr.add(v, sgn * pair.mij.transpose());
        mults.push_back({{i, j}, v});
      }
    }
  }
  switch (sense) {
    case Sense::PositiveDefinite:
      prob.matrix_constraints.emplace_back(std::move(Q_expr), MatrixSense::GeqMarginI);
      prob.vector_constraints.emplace_back(std::move(q_expr), VectorSense::GeqMargin1);
      break;
    case Sense::NegativeSemidefinite:
      prob.matrix_constraints.emplace_back(std::move(Q_expr), MatrixSense::LeqZero);
      prob.vector_constraints.emplace_back(std::move(q_expr), VectorSense::LeqZero);
      break;
    case Sense::PositiveSemidefinite:
      prob.matrix_constraints.emplace_back(std::move(Q_expr), MatrixSense::GeqZero);
      // elementwise q >= 0 encoded as -q <= 0
      {
        VectorExpr neg(q_expr.dim);
        neg.c0 = -q_expr.c0;
        for (auto& [a, c] : q_expr.terms) neg.add(a, -c);
        prob.vector_constraints.emplace_back(std::move(neg), VectorSense::LeqZero);
      }
      break;
  }
  return mults;
}

Restriction restriction_from_name(const std::string& name) {
  if (name == "none") return Restriction::None;
  if (name == "lambda-zero") return Restriction::LambdaZero;
  if (name == "posdef-shape") return Restriction::PosDefShape;
  throw SpecError("unknown restriction mode: " + name);
}

std::string restriction_name(Restriction r) {
  switch (r) {
    case Restriction::None: return "none";
    case Restriction::LambdaZero: return "lambda-zero";
    case Restriction::PosDefShape: return "posdef-shape";
  }
  return "?";
}

AssembledSdp build_rho_sdp(const MethodSpec& spec, const FunctionClass& fc,
                           double rho, Restriction mode) {
  validate(spec);
  if (!fc.valid()) throw SpecError("invalid function class");
  if (rho < 0.0) throw SpecError("rho must be nonnegative");

  // Normalize to L = 1: rates and multiplier signs are invariant, and the
  // solver sees O(1) data at any condition number.
  const FunctionClass fcn{fc.mu / fc.L, 1.0};
  MethodSpec sn = spec;
  sn.alpha = spec.alpha * fc.L;

  const int N = sn.degree;
  AssembledSdp out;
  SdpProblem& prob = out.prob;
  ProblemLayout& lay = out.layout;
  lay.state_dim = 2 * (N + 1);
  lay.p_dim = N + 1;
  for (int r = 0; r < lay.state_dim; ++r)
    for (int c = r; c < lay.state_dim; ++c)
      lay.P_idx.push_back(prob.add_var(
          "P[" + std::to_string(r) + "][" + std::to_string(c) + "]", VarKind::Free));
  for (int r = 0; r < lay.p_dim; ++r)
    lay.p_idx.push_back(prob.add_var("p[" + std::to_string(r) + "]", VarKind::Free));

  // Positive definiteness of V at the memory horizon K = N.
  const BasisWorkspace wsN = roll_method(sn, build_basis(N, N));
  const StateSelectors selN = state_selectors(wsN, N);
  Eigen::MatrixXd U(lay.state_dim, wsN.dim());
  U << selN.X, selN.G;
  MatrixExpr V_N = quad_form_expr(U, lay.P_idx, lay.state_dim, 1.0);
  VectorExpr v_N = linear_form_expr(selN.F, lay.p_idx, 1.0);
  lay.lambda_idx = certify_sign(prob, wsN, fcn, std::move(V_N), std::move(v_N),
                                Sense::PositiveDefinite, "lambda",
                                mode == Restriction::LambdaZero);

  // Decrease V_{N+1} - rho^2 V_N over the extended horizon K = N+1.
  const BasisWorkspace wsK = roll_method(sn, build_basis(N, N + 1));
  const StateSelectors selA = state_selectors(wsK, N + 1);
  const StateSelectors selB = state_selectors(wsK, N);
  Eigen::MatrixXd UA(lay.state_dim, wsK.dim()), UB(lay.state_dim, wsK.dim());
  UA << selA.X, selA.G;
  UB << selB.X, selB.G;
  MatrixExpr dV = quad_form_expr(UA, lay.P_idx, lay.state_dim, 1.0);
  {
    MatrixExpr prev = quad_form_expr(UB, lay.P_idx, lay.state_dim, rho * rho);
    for (auto& [a, F] : prev.terms) dV.add(a, -F);
  }
  VectorExpr dv = linear_form_expr(selA.F, lay.p_idx, 1.0);
  {
    VectorExpr prev = linear_form_expr(selB.F, lay.p_idx, rho * rho);
    for (auto& [a, c] : prev.terms) dv.add(a, -c);
  }
  lay.eta_idx = certify_sign(prob, wsK, fcn, std::move(dV), std::move(dv),
                             Sense::NegativeSemidefinite, "eta");

  if (mode == Restriction::PosDefShape) {
    // Shape restriction: P itself strictly positive definite, p > 0.
    MatrixExpr Pexpr(lay.state_dim);
    int k = 0;
    for (int r = 0; r < lay.state_dim; ++r)
      for (int c = r; c < lay.state_dim; ++c, ++k) {
        Eigen::MatrixXd E = Eigen::MatrixXd::Zero(lay.state_dim, lay.state_dim);
        E(r, c) = 1.0;
        E(c, r) = 1.0;
        Pexpr.add(lay.P_idx[k], E);
      }
    prob.matrix_constraints.emplace_back(std::move(Pexpr), MatrixSense::GeqMarginI);
    VectorExpr pexpr(lay.p_dim);
    for (int r = 0; r < lay.p_dim; ++r)
      pexpr.add(lay.p_idx[r], Eigen::VectorXd::Unit(lay.p_dim, r));
    prob.vector_constraints.emplace_back(std::move(pexpr), VectorSense::GeqMargin1);
  }
  return out;
}

}  // namespace lyap
