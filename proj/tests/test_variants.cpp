#include <doctest.h>

#include <cmath>

#include "lyap/variants.hpp"
#include "lyap/verify.hpp"

using namespace lyap;

TEST_CASE("momentum sequence") {
  RestartSchedule s = momentum_sequence(5);
  REQUIRE(s.theta.size() == 6);
  CHECK(s.theta[0] == 1.0);
  CHECK(s.theta[1] == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0));
  CHECK(s.theta[2] == doctest::Approx(2.1935270853));
  for (size_t i = 0; i + 1 < s.theta.size(); ++i) {
    const double t = s.theta[i];
    CHECK(s.theta[i + 1] == doctest::Approx(0.5 * (1.0 + std::sqrt(4 * t * t + 1))));
    CHECK(s.theta[i] >= (i + 2) / 2.0);  // grows at least linearly
  }
  CHECK_THROWS_AS(momentum_sequence(-1), SpecError);
}

TEST_CASE("exact line search gradient descent hits (kappa-1)/(kappa+1)") {
  for (double kappa : {3.0, 10.0}) {
    const FunctionClass fc{1.0, kappa};
    RateCertificate rc = bisect_els_gd_rate(fc);
    CHECK(rc.rho_star ==
          doctest::Approx((kappa - 1.0) / (kappa + 1.0)).epsilon(2e-3));
    CHECK(rc.certificate.kind == "els-gd");
    CHECK(rc.certificate.nu.size() == 2);
    CHECK(check_certificate_algebraic(rc.certificate, 1e-6).pass);
  }
}

TEST_CASE("exact line search heavy ball beats plain line search") {
  const FunctionClass fc{1.0, 10.0};
  RateCertificate hb = bisect_els_hbm_rate(fc);
  CHECK(hb.rho_star == doctest::Approx(0.7716).epsilon(3e-3));
  CHECK(hb.certificate.kind == "els-hbm");
  CHECK(hb.certificate.nu.size() == 5);
  CHECK(hb.certificate.P.rows() == 4);
  CHECK(hb.certificate.p.size() == 2);

  RateCertificate gd = bisect_els_gd_rate(fc);
  CHECK(hb.rho_star < gd.rho_star - 1e-3);
}

TEST_CASE("search orthogonality holds along simulated line-search runs") {
  const FunctionClass fc{1.0, 8.0};
  std::mt19937_64 rng(3);
  const TestFunction f = random_quadratic(fc, 6, rng);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Ones(6);

  SUBCASE("steepest descent") {
    Trajectory tr = simulate_els_gd(f, x0, 12);
    for (int k = 0; k + 1 <= tr.horizon(); ++k) {
      const double scale = tr.g(k).norm() * tr.g(k + 1).norm() + 1e-30;
      CHECK(std::abs(tr.g(k + 1).dot(tr.x(k + 1) - tr.x(k))) / scale < 1e-9);
      CHECK(std::abs(tr.g(k + 1).dot(tr.g(k))) / scale < 1e-9);
    }
  }
  SUBCASE("two-direction subspace search") {
    // the search is conjugate-direction-like on a quadratic, so it lands on
    // the minimizer within d steps; past that point the gradients are pure
    // roundoff and normalized angles stop meaning anything
    Trajectory tr = simulate_els_hbm(f, x0, 12);
    int checked = 0;
    for (int k = 1; k + 1 <= tr.horizon(); ++k) {
      if (tr.g(k + 1).norm() < 1e-10 * tr.g(0).norm()) break;
      const double scale = tr.g(k + 1).norm() + 1e-30;
      const Eigen::VectorXd step = tr.x(k + 1) - tr.x(k);
      const Eigen::VectorXd lag = tr.x(k) - tr.x(k - 1);
      CHECK(std::abs(tr.g(k + 1).dot(step)) / (scale * step.norm() + 1e-30) < 1e-8);
      CHECK(std::abs(tr.g(k + 1).dot(lag)) / (scale * lag.norm() + 1e-30) < 1e-8);
      CHECK(std::abs(tr.g(k + 1).dot(tr.g(k))) / (scale * tr.g(k).norm() + 1e-30) < 1e-8);
      ++checked;
    }
    CHECK(checked >= 3);
  }
}

TEST_CASE("restarted scheme certificates at kappa = 100") {
  const FunctionClass fc{1.0, 100.0};
  RateCertificate n1 = bisect_restart_rate(fc, 1);
  CHECK(n1.rho_star == doctest::Approx(0.98996).epsilon(2e-3));
  CHECK(n1.certificate.kind == "restart");
  CHECK(n1.certificate.n_inner == 1);

  RateCertificate n5 = bisect_restart_rate(fc, 5);
  CHECK(n5.rho_star == doctest::Approx(0.98447).epsilon(2e-3));
  CHECK(n5.rho_star < n1.rho_star);
  CHECK(check_certificate_algebraic(n5.certificate, 1e-6).pass);
}

TEST_CASE("period optimization returns the pointwise argmin") {
  const FunctionClass fc{1.0, 25.0};
  RestartPlan plan = optimize_restart_period(fc, 3);
  REQUIRE(plan.per_n.size() == 3);
  double best = 2.0;
  int best_n = 0;
  for (const auto& [n, rc] : plan.per_n) {
    CHECK(rc.certificate.n_inner == n);
    if (rc.rho_star < best) {
      best = rc.rho_star;
      best_n = n;
    }
  }
  CHECK(plan.n_star == best_n);
  CHECK(plan.rho_star == doctest::Approx(best));
  CHECK(plan.rho_star <= std::exp(-1.0 / (std::exp(1.0) * std::sqrt(8.0 * 25.0))));
}

TEST_CASE("restart input validation") {
  const FunctionClass fc{1.0, 10.0};
  CHECK_THROWS_AS(bisect_restart_rate(fc, 0), SpecError);
  CHECK_THROWS_AS(build_restart_sdp(fc, momentum_sequence(2), -1.0), SpecError);
  RestartSchedule bad = momentum_sequence(2);
  bad.theta.pop_back();
  CHECK_THROWS_AS(build_restart_sdp(fc, bad, 0.9), SpecError);
  CHECK_THROWS_AS(bisect_els_gd_rate(FunctionClass{0.0, 1.0}), SpecError);
}

TEST_CASE("variant certificates survive a rescaled class") {
  RateCertificate a = bisect_els_gd_rate(FunctionClass{1.0, 10.0});
  RateCertificate b = bisect_els_gd_rate(FunctionClass{3.0, 30.0});
  CHECK(a.rho_star == doctest::Approx(b.rho_star).epsilon(1e-9));
}
