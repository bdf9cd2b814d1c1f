// Acceptance suite: eight numbered criteria, one PASS/FAIL line each on
// stdout, exit code = number of failed criteria. Diagnostics go to stderr.
#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lyap/rate.hpp"
#include "lyap/variants.hpp"
#include "lyap/verify.hpp"

using namespace lyap;

namespace {

// Tolerances pinned by the criteria below.
constexpr double kRateTolGM = 1e-3;
constexpr double kRateTolTMM = 2e-3;
constexpr double kSandwichSlack = 1e-3;
constexpr double kRateTolELS = 1e-3;
constexpr double kRestrictionGap = 1e-3;
constexpr double kAlgebraicTol = 1e-6;
constexpr double kDecreaseTol = 1e-8;
constexpr double kIdentityTol = 1e-9;
constexpr int kDecreaseIters = 200;
constexpr int kQuadTrials = 100;
constexpr int kQuadDim = 20;
constexpr int kLseTrials = 20;
constexpr int kLseDim = 10;
constexpr int kRestartMaxPeriod = 20;

int g_failures = 0;

void report(int criterion, bool pass) {
  std::printf("criterion %d: %s\n", criterion, pass ? "PASS" : "FAIL");
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void complain(const std::string& what) { std::fprintf(stderr, "  %s\n", what.c_str()); }

std::vector<RateCertificate> g_pool;  // everything produced by criteria 1-6

struct Battery {
  std::vector<TestFunction> fns;
};

// One shared battery per function class keyed by kappa (mu is always 1).
Battery& battery_for(const FunctionClass& fc) {
  static std::map<double, Battery> cache;
  auto it = cache.find(fc.kappa());
  if (it != cache.end()) return it->second;
  Battery& b = cache[fc.kappa()];
  std::mt19937_64 rng(9000 + static_cast<uint64_t>(fc.kappa()));
  for (int i = 0; i < kQuadTrials; ++i) b.fns.push_back(random_quadratic(fc, kQuadDim, rng));
  for (int i = 0; i < kLseTrials; ++i)
    b.fns.push_back(random_log_sum_exp(fc, kLseDim, 30, rng));
  return b;
}

Eigen::VectorXd gaussian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v(i) = g(rng);
  return v;
}

Trajectory run_for(const LyapunovCertificate& cert, const TestFunction& f,
                   std::mt19937_64& rng) {
  if (cert.kind == "els-gd") return simulate_els_gd(f, gaussian(f.dim, rng), kDecreaseIters);
  if (cert.kind == "els-hbm")
    return simulate_els_hbm(f, gaussian(f.dim, rng), kDecreaseIters);
  if (cert.kind == "restart")
    return simulate_restart(f, momentum_sequence(cert.n_inner), gaussian(f.dim, rng),
                            kDecreaseIters);
  std::vector<Eigen::VectorXd> x_init;
  for (int i = 0; i <= cert.spec.degree; ++i) x_init.push_back(gaussian(f.dim, rng));
  return simulate_method(cert.spec, f, x_init, kDecreaseIters);
}

// ---------------------------------------------------------------------------

bool criterion_gm_tight() {
  bool ok = true;
  for (double kappa : {2.0, 10.0, 100.0, 1000.0}) {
    const FunctionClass fc{1.0, kappa};
    const MethodSpec gm = make_preset(Preset::GM, fc);
    RateCertificate rc = bisect_rate(gm, fc);
    const double expected = 1.0 - 1.0 / kappa;
    if (std::abs(rc.rho_star - expected) > kRateTolGM) {
      complain("GM kappa=" + std::to_string(kappa) + " rho=" + std::to_string(rc.rho_star) +
               " expected " + std::to_string(expected));
      ok = false;
    }
    const double oracle = quadratic_worst_rate(gm, fc);
    if (std::abs(rc.rho_star - oracle) > kRateTolGM) {
      complain("GM kappa=" + std::to_string(kappa) + " oracle mismatch " +
               std::to_string(oracle));
      ok = false;
    }
    g_pool.push_back(std::move(rc));
  }
  return ok;
}

bool criterion_tmm_rate() {
  bool ok = true;
  for (double kappa : {4.0, 25.0, 100.0, 900.0}) {
    const FunctionClass fc{1.0, kappa};
    RateCertificate rc = bisect_rate(make_preset(Preset::TMM, fc), fc);
    const double expected = 1.0 - 1.0 / std::sqrt(kappa);
    if (std::abs(rc.rho_star - expected) > kRateTolTMM) {
      complain("TMM kappa=" + std::to_string(kappa) + " rho=" + std::to_string(rc.rho_star) +
               " expected " + std::to_string(expected));
      ok = false;
    }
    g_pool.push_back(std::move(rc));
  }
  return ok;
}

// returns the unrestricted kappa=100 rate for the restriction-gap criterion
bool criterion_fgm_sandwich(double* fgm_rate_100) {
  bool ok = true;
  for (double kappa : {10.0, 100.0}) {
    const FunctionClass fc{1.0, kappa};
    const MethodSpec fgm = make_preset(Preset::FGM, fc);
    RateCertificate rc = bisect_rate(fgm, fc);
    const double lower = quadratic_worst_rate(fgm, fc);
    const double upper = std::sqrt(1.0 - 1.0 / std::sqrt(kappa));
    if (rc.rho_star < lower - kSandwichSlack || rc.rho_star > upper + kSandwichSlack) {
      complain("FGM kappa=" + std::to_string(kappa) + " rho=" + std::to_string(rc.rho_star) +
               " outside [" + std::to_string(lower) + ", " + std::to_string(upper) + "]");
      ok = false;
    }
    if (kappa == 100.0) *fgm_rate_100 = rc.rho_star;
    g_pool.push_back(std::move(rc));
  }
  return ok;
}

bool criterion_els_gd() {
  bool ok = true;
  for (double kappa : {3.0, 10.0, 100.0}) {
    const FunctionClass fc{1.0, kappa};
    RateCertificate rc = bisect_els_gd_rate(fc);
    const double expected = (kappa - 1.0) / (kappa + 1.0);
    if (std::abs(rc.rho_star - expected) > kRateTolELS) {
      complain("ELS-GD kappa=" + std::to_string(kappa) + " rho=" +
               std::to_string(rc.rho_star) + " expected " + std::to_string(expected));
      ok = false;
    }
    g_pool.push_back(std::move(rc));
  }
  return ok;
}

bool criterion_restart() {
  bool ok = true;
  for (double kappa : {100.0, 400.0}) {
    const FunctionClass fc{1.0, kappa};
    RestartPlan plan = optimize_restart_period(fc, kRestartMaxPeriod);
    const double bound = std::exp(-1.0 / (std::exp(1.0) * std::sqrt(8.0 * kappa)));
    if (!(plan.rho_star <= bound)) {
      complain("restart kappa=" + std::to_string(kappa) + " optimum " +
               std::to_string(plan.rho_star) + " misses bound " + std::to_string(bound));
      ok = false;
    }
    for (int n : {1, 5, 10, 20}) {
      bool found = false;
      for (const auto& [period, rc] : plan.per_n)
        if (period == n) {
          found = true;
          if (rc.rho_star < plan.rho_star - 1e-12) {
            complain("restart kappa=" + std::to_string(kappa) + " N=" + std::to_string(n) +
                     " undercuts the optimum");
            ok = false;
          }
        }
      if (!found) {
        complain("restart plan missing N=" + std::to_string(n));
        ok = false;
      }
    }
    for (auto& [period, rc] : plan.per_n) g_pool.push_back(std::move(rc));
  }
  return ok;
}

bool criterion_restriction_gap(double fgm_rate_100) {
  const FunctionClass fc{1.0, 100.0};
  BisectOptions opts;
  opts.mode = Restriction::LambdaZero;
  RateCertificate rc = bisect_rate(make_preset(Preset::FGM, fc), fc, opts);
  const bool ok = rc.rho_star >= fgm_rate_100 + kRestrictionGap;
  if (!ok)
    complain("restricted rate " + std::to_string(rc.rho_star) +
             " not separated from unrestricted " + std::to_string(fgm_rate_100));
  g_pool.push_back(std::move(rc));
  return ok;
}

bool criterion_soundness() {
  bool ok = true;
  std::mt19937_64 rng(2718);
  for (const RateCertificate& rc : g_pool) {
    const LyapunovCertificate& cert = rc.certificate;
    ResidualReport rep = check_certificate_algebraic(cert, kAlgebraicTol);
    if (!rep.pass) {
      complain("algebraic residuals fail: " + cert.kind +
               " kappa=" + std::to_string(cert.fc.kappa()) +
               " rho=" + std::to_string(cert.rho));
      ok = false;
      continue;
    }
    int bad = 0;
    for (const TestFunction& f : battery_for(cert.fc).fns) {
      Trajectory tr = run_for(cert, f, rng);
      DecreaseReport dr = check_decrease_on_trajectory(cert, tr, kDecreaseTol);
      if (!dr.pass) ++bad;
    }
    if (bad > 0) {
      complain("decrease fails on " + std::to_string(bad) + " runs: " + cert.kind +
               " kappa=" + std::to_string(cert.fc.kappa()) +
               " rho=" + std::to_string(cert.rho) +
               (cert.kind == "restart" ? " N=" + std::to_string(cert.n_inner) : ""));
      ok = false;
    }
  }
  return ok;
}

bool property_phi_boundary() {
  // gradient-dominated pair sitting exactly on the interpolation boundary
  const FunctionClass fc{1.0, 2.0};
  std::vector<InterpPoint> pts(2);
  pts[0].y = Eigen::VectorXd::Constant(1, 1.0);
  pts[0].g = Eigen::VectorXd::Constant(1, 2.0);
  pts[0].f = 1.0;
  pts[1].y = Eigen::VectorXd::Zero(1);
  pts[1].g = Eigen::VectorXd::Zero(1);
  pts[1].f = 0.0;
  if (std::abs(phi_value(pts, fc, 0, 1)) > 1e-12) return false;
  if (std::abs(phi_value(pts, fc, 1, 0)) > 1e-12) return false;
  if (!interpolable(pts, fc, 1e-12)) return false;
  for (double eps : {1e-6, -1e-6}) {
    auto bumped = pts;
    bumped[0].f += eps;
    if (interpolable(bumped, fc, 1e-9)) return false;
  }
  return true;
}

bool property_selector_identity() {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const FunctionClass fc{1.0, 10.0};
  const int K = 3;
  for (int trial = 0; trial < 5; ++trial) {
    MethodSpec spec;
    spec.degree = trial % 3;
    spec.alpha = (0.2 + 1.3 * unif(rng)) / fc.L;
    spec.beta.resize(spec.degree + 1);
    spec.gamma.resize(spec.degree + 1);
    for (int j = 0; j <= spec.degree; ++j) {
      spec.beta[j] = 0.1 + unif(rng);
      spec.gamma[j] = 0.1 + unif(rng);
    }
    spec.beta /= spec.beta.sum();
    spec.gamma /= spec.gamma.sum();

    const int d = spec.degree + K + 2;
    TestFunction f = random_quadratic(fc, d, rng);
    std::vector<Eigen::VectorXd> x_init;
    for (int i = 0; i <= spec.degree; ++i) x_init.push_back(gaussian(d, rng));
    Trajectory tr = simulate_method(spec, f, x_init, K + 1);
    const Eigen::MatrixXd B = basis_matrix(tr, K);
    const BasisWorkspace ws = roll_method(spec, build_basis(spec.degree, K));

    for (int k = -spec.degree; k <= K + 1; ++k) {
      const Eigen::VectorXd lhs = tr.x(k) - tr.x_star;
      if ((lhs - B * ws.x(k).transpose()).norm() > kIdentityTol * (1.0 + lhs.norm()))
        return false;
    }
    for (int k = 0; k <= K; ++k) {
      if ((tr.y(k) - tr.x_star - B * ws.y(k).transpose()).norm() > kIdentityTol)
        return false;
      if ((tr.g(k) - B * ws.g(k).transpose()).norm() > kIdentityTol) return false;
    }
  }
  return true;
}

bool property_bracket_consistency() {
  for (const RateCertificate& rc : g_pool) {
    if (rc.bracket_history.empty()) return false;
    double max_infeasible = -1.0, min_feasible = 1e12;
    for (const ProbeRecord& pr : rc.bracket_history) {
      if (pr.status == SolveStatus::Feasible)
        min_feasible = std::min(min_feasible, pr.rho);
      else if (pr.status == SolveStatus::Infeasible)
        max_infeasible = std::max(max_infeasible, pr.rho);
      else
        return false;  // Unknown probes abort the bisection
    }
    if (min_feasible > 1e11) return false;
    if (max_infeasible >= min_feasible) return false;
    if (std::abs(rc.rho_star - min_feasible) > 1e-15) return false;
    if (max_infeasible >= 0.0 && min_feasible - max_infeasible > 1e-4 + 1e-12)
      return false;  // bracket was not narrowed to tolerance
  }
  return !g_pool.empty();
}

bool property_slater() {
  for (auto [N, K, d] : {std::array<int, 3>{0, 2, 4}, std::array<int, 3>{1, 2, 5}}) {
    const FunctionClass fc{1.0, 10.0};
    const MethodSpec spec = make_preset(N == 0 ? Preset::GM : Preset::FGM, fc);
    Trajectory tr = slater_trajectory(spec, fc, K, d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_matrix(tr, K));
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 1e-14 * std::max(1.0, hi))) return false;
  }
  return true;
}

bool criterion_properties() {
  bool ok = true;
  if (!property_phi_boundary()) {
    complain("interpolation boundary example failed");
    ok = false;
  }
  if (!property_selector_identity()) {
    complain("selector/trajectory identity failed");
    ok = false;
  }
  if (!property_bracket_consistency()) {
    complain("bracket consistency failed");
    ok = false;
  }
  if (!property_slater()) {
    complain("slater fixture not strictly feasible");
    ok = false;
  }
  return ok;
}

}  // namespace

int main() {
  double fgm_rate_100 = 0.0;
  report(1, criterion_gm_tight());
  report(2, criterion_tmm_rate());
  report(3, criterion_fgm_sandwich(&fgm_rate_100));
  report(4, criterion_els_gd());
  report(5, criterion_restart());
  report(6, criterion_restriction_gap(fgm_rate_100));
  report(7, criterion_soundness());
  report(8, criterion_properties());
  return g_failures;
}
