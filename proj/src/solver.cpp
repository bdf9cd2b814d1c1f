#include "lyap/solver.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lyap {

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unknown: return "unknown";
  }
  return "?";
}

namespace {

template <typename Real>
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// Cone block in the augmented variables w = (z, t): C0 + sum_a w_a C_a >= 0.
// Cvec caches the coefficient matrices flattened row-wise (one row per term)
// so the Hessian fill is a single matrix product.
template <typename Real>
struct Block {
  Mat<Real> C0;
  std::vector<std::pair<int, Mat<Real>>> terms;
  Mat<Real> Cvec;

  Mat<Real> eval(const Vec<Real>& w) const {
    Mat<Real> S = C0;
    for (const auto& [a, C] : terms) S += w[a] * C;
    return S;
  }

  void flatten() {
    const int n2 = static_cast<int>(C0.size());
    Cvec.resize(static_cast<int>(terms.size()), n2);
    for (int a = 0; a < static_cast<int>(terms.size()); ++a)
      Cvec.row(a) = Eigen::Map<const Vec<Real>>(terms[a].second.data(), n2).transpose();
  }
};

// Scalar cone entry c + d^T w > 0 with sparse d.
template <typename Real>
struct ScalarRow {
  Real c;
  std::vector<std::pair<int, Real>> d;

  Real eval(const Vec<Real>& w) const {
    Real s = c;
    for (const auto& [a, v] : d) s += w[a] * v;
    return s;
  }
};

// Log-det barrier path following for: maximize t over
// { w : all blocks PSD, all scalar rows positive }, where every constraint
// carries the margin t (expr - t*I >= 0 resp. -expr - t*I >= 0). t* is then
// the best joint margin; the problem data is homogeneous in z, so without the
// shared margin a tiny rescaling could fake feasibility. The feasible set is
// bounded (every variable carries box rows), so the central path exists and
// the standard bound max t <= t(sigma) + n_barrier/sigma applies at centers.
template <typename Real>
class BarrierCore {
 public:
  BarrierCore(const SdpProblem& prob, const SolveSettings& st) : st_(st) {
    const int m = prob.num_vars();
    nvar_ = m + 1;  // margin variable t is index m
    t_idx_ = m;
    nonneg_.resize(m);
    for (int a = 0; a < m; ++a) nonneg_[a] = prob.vars[a].kind == VarKind::Nonneg;
    for (const auto& [expr, sense] : prob.matrix_constraints) {
      Block<Real> b;
      b.C0 = Mat<Real>::Zero(expr.dim, expr.dim);
      switch (sense) {
        case MatrixSense::GeqMarginI:
          b.C0 = expr.F0.template cast<Real>();
          for (const auto& [a, F] : expr.terms) b.terms.push_back({a, F.template cast<Real>()});
          b.terms.push_back({t_idx_, -Mat<Real>::Identity(expr.dim, expr.dim)});
          break;
        case MatrixSense::LeqZero:
          b.C0 = -expr.F0.template cast<Real>();
          for (const auto& [a, F] : expr.terms) b.terms.push_back({a, (-F).template cast<Real>()});
          b.terms.push_back({t_idx_, -Mat<Real>::Identity(expr.dim, expr.dim)});
          break;
        case MatrixSense::GeqZero:
          b.C0 = expr.F0.template cast<Real>();
          for (const auto& [a, F] : expr.terms) b.terms.push_back({a, F.template cast<Real>()});
          b.terms.push_back({t_idx_, -Mat<Real>::Identity(expr.dim, expr.dim)});
          break;
      }
      // Builders may add the same variable several times (e.g. the value at
      // two consecutive steps); the Hessian assembly needs one term per
      // variable, so merge them here.
      std::sort(b.terms.begin(), b.terms.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      std::vector<std::pair<int, Mat<Real>>> merged;
      for (auto& [a, C] : b.terms) {
        if (!merged.empty() && merged.back().first == a) merged.back().second += C;
        else merged.emplace_back(a, std::move(C));
      }
      b.terms = std::move(merged);
      b.flatten();
      n_barrier_ += expr.dim;
      blocks_.push_back(std::move(b));
    }
    for (const auto& [expr, sense] : prob.vector_constraints) {
      for (int r = 0; r < expr.dim; ++r) {
        ScalarRow<Real> row;
        if (sense == VectorSense::GeqMargin1) {
          row.c = Real(expr.c0[r]);
          for (const auto& [a, cvec] : expr.terms)
            if (cvec[r] != 0.0) row.d.push_back({a, Real(cvec[r])});
        } else {
          row.c = Real(-expr.c0[r]);
          for (const auto& [a, cvec] : expr.terms)
            if (cvec[r] != 0.0) row.d.push_back({a, Real(-cvec[r])});
        }
        row.d.push_back({t_idx_, Real(-1)});
        std::sort(row.d.begin(), row.d.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        std::vector<std::pair<int, Real>> dm;
        for (const auto& [a, v] : row.d) {
          if (!dm.empty() && dm.back().first == a) dm.back().second += v;
          else dm.emplace_back(a, v);
        }
        row.d = std::move(dm);
        scalars_.push_back(std::move(row));
      }
    }
    // Box normalization: Free/t in [-1,1], Nonneg in [0,1].
    for (int a = 0; a < m; ++a) {
      const bool nonneg = prob.vars[a].kind == VarKind::Nonneg;
      scalars_.push_back({Real(0), {{a, Real(1)}}});              // z >= 0 or z >= -1
      if (!nonneg) scalars_.back().c = Real(1);
      scalars_.push_back({Real(1), {{a, Real(-1)}}});             // z <= 1
    }
    scalars_.push_back({Real(1), {{t_idx_, Real(1)}}});           // t >= -1
    scalars_.push_back({Real(1), {{t_idx_, Real(-1)}}});          // t <= 1
    n_barrier_ += static_cast<int>(scalars_.size());
  }

  FeasibilityOutcome run() {
    FeasibilityOutcome out;
    Vec<Real> w = Vec<Real>::Zero(nvar_);
    w[t_idx_] = Real(-0.5);
    // Nonneg variables sit on their box boundary at zero; nudge them inward
    // and shrink the nudge until every cone is strict (the non-box slacks all
    // tend to positive constants as the nudge vanishes).
    bool interior = false;
    Real eps = Real(1e-4);
    for (int tries = 0; tries < 200 && !interior; ++tries) {
      for (int a = 0; a + 1 < nvar_; ++a)
        if (nonneg_[a]) w[a] = eps;
      interior = strictly_feasible(w);
      eps *= Real(0.5);
    }
    if (!interior) {
      out.status = SolveStatus::Unknown;
      out.diagnostics = "no strictly interior starting point found";
      return out;
    }
    Real sigma = Real(st_.sigma0);
    int newton = 0;
    bool centered_ok = false;
    while (true) {
      if (!center(w, sigma, newton, centered_ok)) {
        // Line-search/numerical failure: fall back to whatever is provable.
        out.newton_steps = newton;
        finish(out, w, sigma, centered_ok);
        if (out.status == SolveStatus::Unknown) {
          std::ostringstream diag;
          diag << "newton centering failed (" << center_fail_ << ") at sigma="
               << static_cast<double>(sigma)
               << " t=" << static_cast<double>(w[t_idx_]) << " newton=" << newton;
          out.diagnostics = diag.str();
        }
        return out;
      }
      const Real gap = Real(2) * Real(n_barrier_) / sigma;
      const Real t = w[t_idx_];
      if (st_.early_exit_margin > 0 && t > Real(st_.early_exit_margin)) break;
      if (t + gap < Real(st_.eps_feas)) break;                    // provably infeasible
      if (gap <= Real(st_.gap_tol)) break;
      if (newton > st_.max_newton) {
        out.newton_steps = newton;
        finish(out, w, sigma, centered_ok);
        if (out.status == SolveStatus::Unknown)
          out.diagnostics = "newton iteration limit";
        return out;
      }
      sigma *= Real(st_.sigma_growth);
    }
    out.newton_steps = newton;
    finish(out, w, sigma, centered_ok);
    return out;
  }

 private:
  bool strictly_feasible(const Vec<Real>& w) const {
    for (const auto& b : blocks_) {
      Eigen::LLT<Mat<Real>> llt(b.eval(w));
      if (llt.info() != Eigen::Success) return false;
    }
    for (const auto& row : scalars_)
      if (row.eval(w) <= Real(0)) return false;
    return true;
  }

  Real barrier_value(const Vec<Real>& w, Real sigma, bool& ok) const {
    Real phi = -sigma * w[t_idx_];
    ok = true;
    for (const auto& b : blocks_) {
      Eigen::LLT<Mat<Real>> llt(b.eval(w));
      if (llt.info() != Eigen::Success) {
        ok = false;
        return phi;
      }
      const auto& Lm = llt.matrixLLT();
      for (int i = 0; i < Lm.rows(); ++i) phi -= Real(2) * std::log(Lm(i, i));
    }
    for (const auto& row : scalars_) {
      const Real s = row.eval(w);
      if (s <= Real(0)) {
        ok = false;
        return phi;
      }
      phi -= std::log(s);
    }
    return phi;
  }

  // Newton iterations at fixed sigma until decrement <= 0.1; false on failure.
  // The damped phase can run long on the first centering of a large block
  // (hundreds of multipliers), so the cap is generous; max_newton still
  // bounds the whole solve.
  bool center(Vec<Real>& w, Real sigma, int& newton, bool& centered_ok) {
    centered_ok = false;
    for (int it = 0; it < 400; ++it) {
      Vec<Real> g = Vec<Real>::Zero(nvar_);
      Mat<Real> H = Mat<Real>::Zero(nvar_, nvar_);
      g[t_idx_] = -sigma;
      for (const auto& b : blocks_) {
        const Mat<Real> S = b.eval(w);
        Eigen::LLT<Mat<Real>> llt(S);
        if (llt.info() != Eigen::Success) return fail("block left cone");
        const int n = static_cast<int>(S.rows());
        const Mat<Real> W = llt.solve(Mat<Real>::Identity(n, n));
        const int nb = static_cast<int>(b.terms.size());
        // grad_a = -<W, C_a>,  hess_ac = <W C_a W, C_c>; the latter is one
        // product of the flattened coefficient rows.
        Mat<Real> Y(nb, n * n);
        Mat<Real> T(n, n);
        for (int a = 0; a < nb; ++a) {
          T.noalias() = W * b.terms[a].second * W;
          Y.row(a) = Eigen::Map<const Vec<Real>>(T.data(), n * n).transpose();
        }
        const Vec<Real> gv = b.Cvec * Eigen::Map<const Vec<Real>>(W.data(), n * n);
        for (int a = 0; a < nb; ++a) g[b.terms[a].first] -= gv[a];
        const Mat<Real> Hsub = Y * b.Cvec.transpose();
        for (int a = 0; a < nb; ++a)
          for (int c = 0; c < nb; ++c)
            H(b.terms[a].first, b.terms[c].first) += Hsub(a, c);
      }
      for (const auto& row : scalars_) {
        const Real s = row.eval(w);
        if (s <= Real(0)) return fail("scalar row left cone");
        const Real inv = Real(1) / s, inv2 = inv * inv;
        for (const auto& [a, da] : row.d) {
          g[a] -= da * inv;
          for (const auto& [c, dc] : row.d) {
            if (c < a) continue;
            H(a, c) += da * dc * inv2;
            if (a != c) H(c, a) += da * dc * inv2;
          }
        }
      }
      Eigen::LDLT<Mat<Real>> ldlt(H);
      Vec<Real> step = ldlt.solve(-g);
      if (ldlt.info() != Eigen::Success || !step.allFinite())
        return fail("hessian factorization failed");
      const Real decr2 = -g.dot(step);
      if (!(decr2 > Real(0))) {
        // Numerically flat: accept as centered if the last decrement was tiny.
        centered_ok = true;
        return true;
      }
      // Exact max step over scalar rows, backtracking for the blocks.
      Real amax = Real(1);
      for (const auto& row : scalars_) {
        Real ds = Real(0);
        for (const auto& [a, da] : row.d) ds += da * step[a];
        if (ds < Real(0)) amax = std::min(amax, -Real(0.995) * row.eval(w) / ds);
      }
      bool ok = false;
      Real phi0 = barrier_value(w, sigma, ok);
      if (!ok) return fail("barrier undefined at iterate");
      Real alpha = amax;
      bool moved = false;
      for (int bt = 0; bt < 70; ++bt) {
        Vec<Real> wn = w + alpha * step;
        bool okn = false;
        const Real phin = barrier_value(wn, sigma, okn);
        if (okn && phin <= phi0 - Real(0.01) * alpha * decr2) {
          w = wn;
          moved = true;
          break;
        }
        alpha *= Real(0.5);
      }
      ++newton;
#ifdef LYAP_SOLVER_TRACE
      std::fprintf(stderr,
                   "  it=%d sigma=%g t=%g decr2=%g amax=%g alpha=%g phi0=%g\n",
                   it, (double)sigma, (double)w[t_idx_], (double)decr2,
                   (double)amax, (double)alpha, (double)phi0);
#endif
      if (!moved) return fail("line search stalled");
      if (decr2 < Real(0.01)) {  // newton decrement <= 0.1: centered
        centered_ok = true;
        return true;
      }
    }
    return fail("iteration cap at fixed sigma");
  }

  bool fail(const char* why) {
    center_fail_ = why;
    return false;
  }

  void finish(FeasibilityOutcome& out, const Vec<Real>& w, Real sigma,
              bool centered_ok) const {
    const double t = static_cast<double>(w[t_idx_]);
    const double gap =
        centered_ok ? static_cast<double>(Real(2) * Real(n_barrier_) / sigma)
                    : std::numeric_limits<double>::infinity();
    out.margin = t;
    out.margin_bound = t + gap;
    out.values.resize(nvar_ - 1);
    for (int a = 0; a + 1 < nvar_; ++a) out.values[a] = static_cast<double>(w[a]);
    std::ostringstream ss;
    ss << "sigma=" << static_cast<double>(sigma) << " gap=" << gap
       << " newton=" << out.newton_steps;
    out.diagnostics = ss.str();
    if (t > st_.eps_feas) {
      out.status = SolveStatus::Feasible;
    } else if (out.margin_bound < st_.eps_feas) {
      out.status = SolveStatus::Infeasible;
    } else {
      out.status = SolveStatus::Unknown;
    }
  }

  const SolveSettings st_;
  int nvar_ = 0;
  int t_idx_ = 0;
  int n_barrier_ = 0;
  std::string center_fail_;
  std::vector<char> nonneg_;
  std::vector<Block<Real>> blocks_;
  std::vector<ScalarRow<Real>> scalars_;
};

}  // namespace

FeasibilityOutcome solve_feasibility(const SdpProblem& prob,
                                     const SolveSettings& settings) {
  if (settings.long_double_core) {
    BarrierCore<long double> core(prob, settings);
    return core.run();
  }
  BarrierCore<double> core(prob, settings);
  FeasibilityOutcome out = core.run();
  if (out.status == SolveStatus::Unknown) {
    // badly scaled blocks can stall the double-precision centering;
    // the extended core usually still resolves them
    BarrierCore<long double> retry(prob, settings);
    FeasibilityOutcome out2 = retry.run();
    if (out2.status != SolveStatus::Unknown) return out2;
  }
  return out;
}

}  // namespace lyap
