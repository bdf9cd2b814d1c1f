#include <doctest.h>

#include "lyap/core.hpp"

using namespace lyap;

TEST_CASE("function class basics") {
  FunctionClass fc{1.0, 10.0};
  CHECK(fc.valid());
  CHECK(fc.kappa() == doctest::Approx(10.0));
  CHECK_FALSE(FunctionClass{0.0, 1.0}.valid());
  CHECK_FALSE(FunctionClass{-1.0, 1.0}.valid());
  CHECK_FALSE(FunctionClass{2.0, 1.0}.valid());
}

TEST_CASE("preset coefficients at kappa=100") {
  const FunctionClass fc{1.0, 100.0};

  SUBCASE("gm") {
    MethodSpec s = make_preset(Preset::GM, fc);
    CHECK(s.degree == 0);
    CHECK(s.alpha == doctest::Approx(0.01));
    CHECK(s.beta.size() == 1);
    CHECK(s.beta[0] == doctest::Approx(1.0));
    CHECK(s.gamma[0] == doctest::Approx(1.0));
  }
  SUBCASE("hbm") {
    MethodSpec s = make_preset(Preset::HBM, fc);
    CHECK(s.degree == 1);
    CHECK(s.alpha == doctest::Approx(4.0 / 121.0));
    const double b = 81.0 / 121.0;
    CHECK(s.beta[0] == doctest::Approx(1.0 + b));
    CHECK(s.beta[1] == doctest::Approx(-b));
    CHECK(s.gamma[0] == doctest::Approx(1.0));
    CHECK(s.gamma[1] == doctest::Approx(0.0));
  }
  SUBCASE("fgm") {
    MethodSpec s = make_preset(Preset::FGM, fc);
    CHECK(s.alpha == doctest::Approx(0.01));
    const double c = 9.0 / 11.0;
    CHECK(s.beta[0] == doctest::Approx(1.0 + c));
    CHECK(s.beta[1] == doctest::Approx(-c));
    CHECK(s.gamma[0] == doctest::Approx(1.0 + c));
    CHECK(s.gamma[1] == doctest::Approx(-c));
  }
  SUBCASE("tmm") {
    MethodSpec s = make_preset(Preset::TMM, fc);
    CHECK(s.alpha == doctest::Approx(0.019));
    CHECK(s.beta[0] == doctest::Approx(1.0 + 81.0 / 110.0));
    CHECK(s.gamma[0] == doctest::Approx(1.0 + 81.0 / 209.0));
  }
}

TEST_CASE("coefficient sums are one for every preset") {
  for (double L : {2.0, 10.0, 1000.0}) {
    const FunctionClass fc{1.0, L};
    for (Preset p : {Preset::GM, Preset::HBM, Preset::FGM, Preset::TMM}) {
      MethodSpec s = make_preset(p, fc);
      CHECK(s.beta.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(s.gamma.sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK_NOTHROW(validate(s));
    }
  }
}

TEST_CASE("validate rejects malformed specs") {
  MethodSpec s = make_preset(Preset::FGM, FunctionClass{1.0, 10.0});

  MethodSpec bad = s;
  bad.beta[0] += 1e-6;
  CHECK_THROWS_WITH_AS(validate(bad), "SumNotOne(beta)", SpecError);

  bad = s;
  bad.gamma[1] += 1e-6;
  CHECK_THROWS_WITH_AS(validate(bad), "SumNotOne(gamma)", SpecError);

  bad = s;
  bad.alpha = 0.0;
  CHECK_THROWS_WITH_AS(validate(bad), "ZeroAlpha", SpecError);

  bad = s;
  bad.gamma[0] = 0.0;
  bad.gamma[1] = 1.0;
  CHECK_THROWS_WITH_AS(validate(bad), "ZeroGammaZero", SpecError);

  bad = s;
  bad.beta.resize(1);
  CHECK_THROWS_AS(validate(bad), SpecError);
}

TEST_CASE("preset names round trip") {
  for (Preset p : {Preset::GM, Preset::HBM, Preset::FGM, Preset::TMM})
    CHECK(preset_from_name(preset_name(p)) == p);
  CHECK_THROWS_AS(preset_from_name("nesterov"), SpecError);
}
