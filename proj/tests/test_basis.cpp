#include <doctest.h>

#include <Eigen/Dense>

#include "lyap/basis.hpp"

using namespace lyap;

TEST_CASE("unit layout of the unrolled workspace") {
  BasisWorkspace ws = build_basis(1, 2);
  CHECK(ws.dim() == 5);
  CHECK(ws.fcols == 3);
  CHECK(ws.xbar.size() == 5);  // k = -1..3 once rolled
  CHECK(ws.x(-1) == Eigen::RowVectorXd::Unit(5, 0));
  CHECK(ws.x(0) == Eigen::RowVectorXd::Unit(5, 1));
  CHECK(ws.g(0) == Eigen::RowVectorXd::Unit(5, 2));
  CHECK(ws.g(2) == Eigen::RowVectorXd::Unit(5, 4));
  CHECK(ws.f(1) == Eigen::RowVectorXd::Unit(3, 1));
  CHECK(ws.star_row().isZero());
  CHECK(ws.star_frow().size() == 3);

  const std::vector<int> ids = ws.index_set();
  REQUIRE(ids.size() == 4);
  CHECK(ids[0] == 0);
  CHECK(ids[2] == 2);
  CHECK(ids[3] == BasisWorkspace::kStarIndex);
  CHECK(ws.yrow(BasisWorkspace::kStarIndex).isZero());
  CHECK(ws.frow(BasisWorkspace::kStarIndex).isZero());

  CHECK_THROWS_AS(build_basis(-1, 0), SpecError);
}

TEST_CASE("rolling reproduces the method recursion") {
  const FunctionClass fc{1.0, 10.0};
  const MethodSpec s = make_preset(Preset::FGM, fc);
  const BasisWorkspace ws = roll_method(s, build_basis(1, 2));
  CHECK(ws.rolled);

  for (int k = 0; k <= 2; ++k) {
    Eigen::RowVectorXd y = s.gamma[0] * ws.x(k) + s.gamma[1] * ws.x(k - 1);
    Eigen::RowVectorXd xn =
        s.beta[0] * ws.x(k) + s.beta[1] * ws.x(k - 1) - s.alpha * ws.g(k);
    CHECK((ws.y(k) - y).norm() == doctest::Approx(0.0));
    CHECK((ws.x(k + 1) - xn).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("rolled rows are causal") {
  const FunctionClass fc{1.0, 10.0};
  const BasisWorkspace ws = roll_method(make_preset(Preset::FGM, fc), build_basis(1, 2));
  // x_2 and y_2 precede the gradient at step 2 (unit coordinate 4).
  CHECK(ws.x(2)(4) == 0.0);
  CHECK(ws.y(2)(4) == 0.0);
  // x_3 consumes it.
  CHECK(ws.x(3)(4) != 0.0);
}

TEST_CASE("rolling checks the degree") {
  const FunctionClass fc{1.0, 10.0};
  CHECK_THROWS_AS(roll_method(make_preset(Preset::FGM, fc), build_basis(0, 1)),
                  SpecError);
  CHECK_THROWS_AS(roll_method(make_preset(Preset::GM, fc), build_basis(1, 1)),
                  SpecError);
}
