#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lyap/rate.hpp"

using namespace lyap;

namespace {

// History must split cleanly: every infeasible probe below every feasible one,
// and the returned rate equal to the smallest feasible probe.
void check_bracket(const RateCertificate& rc) {
  double max_inf = 0.0, min_feas = 2.0;
  for (const ProbeRecord& pr : rc.bracket_history) {
    if (pr.status == SolveStatus::Feasible) min_feas = std::min(min_feas, pr.rho);
    if (pr.status == SolveStatus::Infeasible) max_inf = std::max(max_inf, pr.rho);
  }
  CHECK(max_inf < min_feas);
  CHECK(rc.rho_star == doctest::Approx(min_feas));
}

}  // namespace

TEST_CASE("gradient method rate matches 1 - 1/kappa") {
  const FunctionClass fc{1.0, 10.0};
  RateCertificate rc = bisect_rate(make_preset(Preset::GM, fc), fc);
  CHECK(rc.rho_star == doctest::Approx(0.9).epsilon(2e-3));
  CHECK(rc.certificate.kind == "method");
  CHECK(rc.certificate.rho == rc.rho_star);
  CHECK(rc.certificate.margin > 0.0);
  check_bracket(rc);
}

TEST_CASE("bisection tolerance bounds the bracket width") {
  const FunctionClass fc{1.0, 4.0};
  BisectOptions opts;
  opts.tol_rho = 1e-3;
  RateCertificate rc = bisect_rate(make_preset(Preset::GM, fc), fc, opts);
  CHECK(rc.rho_star >= 0.75);
  CHECK(rc.rho_star <= 0.75 + 2e-3);
}

TEST_CASE("small step sizes slow the certified rate accordingly") {
  // alpha below 2/(mu+L) contracts each eigenmode by 1 - alpha mu at worst.
  const FunctionClass fc{1.0, 10.0};
  MethodSpec s;
  s.degree = 0;
  s.alpha = 0.01;
  s.beta = Eigen::VectorXd::Ones(1);
  s.gamma = Eigen::VectorXd::Ones(1);
  RateCertificate rc = bisect_rate(s, fc);
  CHECK(rc.rho_star == doctest::Approx(0.99).epsilon(2e-3));
}

TEST_CASE("rate is invariant under joint rescaling of the class") {
  MethodSpec s1 = make_preset(Preset::FGM, FunctionClass{1.0, 10.0});
  RateCertificate a = bisect_rate(s1, FunctionClass{1.0, 10.0});
  MethodSpec s2 = make_preset(Preset::FGM, FunctionClass{100.0, 1000.0});
  RateCertificate b = bisect_rate(s2, FunctionClass{100.0, 1000.0});
  CHECK(a.rho_star == doctest::Approx(b.rho_star).epsilon(1e-9));
}

TEST_CASE("no certificate below the true rate") {
  const FunctionClass fc{1.0, 10.0};
  BisectOptions opts;
  opts.rho_max = 0.5;
  CHECK_THROWS_AS(bisect_rate(make_preset(Preset::GM, fc), fc, opts),
                  NoCertificateWithinBracket);
}

TEST_CASE("restricted programs certify no better than the full one") {
  const FunctionClass fc{1.0, 100.0};
  const MethodSpec fgm = make_preset(Preset::FGM, fc);
  RateCertificate full = bisect_rate(fgm, fc);
  BisectOptions opts;
  opts.mode = Restriction::LambdaZero;
  RateCertificate lz = bisect_rate(fgm, fc, opts);
  CHECK(lz.certificate.mode == Restriction::LambdaZero);
  CHECK(lz.rho_star > full.rho_star + 1e-3);
  CHECK(lz.certificate.lambda.empty());
}

TEST_CASE("kappa grid spacing") {
  const std::vector<double> lin = kappa_grid(2.0, 10.0, 5, false);
  REQUIRE(lin.size() == 5);
  CHECK(lin.front() == doctest::Approx(2.0));
  CHECK(lin.back() == doctest::Approx(10.0));
  CHECK(lin[2] == doctest::Approx(6.0));

  const std::vector<double> lg = kappa_grid(1.0, 100.0, 3, true);
  REQUIRE(lg.size() == 3);
  CHECK(lg[1] == doctest::Approx(10.0));

  CHECK(kappa_grid(5.0, 5.0, 1, true).size() == 1);
}

TEST_CASE("sweep produces one certificate per kappa") {
  auto family = [](const FunctionClass& fc) { return make_preset(Preset::GM, fc); };
  auto rows = sweep_rates(family, {2.0, 10.0});
  REQUIRE(rows.size() == 2);
  REQUIRE(rows[0].second.has_value());
  REQUIRE(rows[1].second.has_value());
  CHECK(rows[0].second->rho_star == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(rows[1].second->rho_star == doctest::Approx(0.9).epsilon(2e-3));
}
