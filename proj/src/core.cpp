#include "lyap/core.hpp"

#include <cmath>

namespace lyap {

namespace {

constexpr double kSumTol = 1e-12;

MethodSpec from_short_form(double alpha, double b, double c) {
  MethodSpec spec;
  if (b == 0.0 && c == 0.0) {
    spec.degree = 0;
    spec.alpha = alpha;
    spec.beta = Eigen::VectorXd::Ones(1);
    spec.gamma = Eigen::VectorXd::Ones(1);
    return spec;
  }
  spec.degree = 1;
  spec.alpha = alpha;
  spec.beta = Eigen::Vector2d(1.0 + b, -b);
  spec.gamma = Eigen::Vector2d(1.0 + c, -c);
  return spec;
}

}  // namespace

Preset preset_from_name(const std::string& name) {
  if (name == "gm" || name == "GM") return Preset::GM;
  if (name == "hbm" || name == "HBM") return Preset::HBM;
  if (name == "fgm" || name == "FGM") return Preset::FGM;
  if (name == "tmm" || name == "TMM") return Preset::TMM;
  throw SpecError("unknown preset: " + name);
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::GM: return "gm";
    case Preset::HBM: return "hbm";
    case Preset::FGM: return "fgm";
    case Preset::TMM: return "tmm";
  }
  return "?";
}

MethodSpec make_preset(Preset which, const FunctionClass& fc) {
  if (!fc.valid()) throw SpecError("invalid function class");
  const double L = fc.L, mu = fc.mu;
  const double rk = std::sqrt(fc.kappa());
  switch (which) {
    case Preset::GM:
      return from_short_form(1.0 / L, 0.0, 0.0);
    case Preset::HBM: {
      const double sL = std::sqrt(L), sm = std::sqrt(mu);
      const double b = (rk - 1.0) / (rk + 1.0);
      return from_short_form(4.0 / ((sL + sm) * (sL + sm)), b * b, 0.0);
    }
    case Preset::FGM: {
      const double c = (rk - 1.0) / (rk + 1.0);
      return from_short_form(1.0 / L, c, c);
    }
    case Preset::TMM: {
      const double k = fc.kappa();
      const double b = (rk - 1.0) * (rk - 1.0) / (k + rk);
      const double c = (rk - 1.0) * (rk - 1.0) / (2.0 * k + rk - 1.0);
      return from_short_form((2.0 * std::sqrt(L) - std::sqrt(mu)) / (L * std::sqrt(L)), b, c);
    }
  }
  throw SpecError("unknown preset");
}

const MethodSpec& validate(const MethodSpec& spec) {
  const int n = spec.degree + 1;
  if (spec.degree < 0 || spec.beta.size() != n || spec.gamma.size() != n)
    throw SpecError("coefficient count must be degree+1");
  if (std::abs(spec.beta.sum() - 1.0) > kSumTol) throw SpecError("SumNotOne(beta)");
  if (std::abs(spec.gamma.sum() - 1.0) > kSumTol) throw SpecError("SumNotOne(gamma)");
  if (spec.alpha == 0.0) throw SpecError("ZeroAlpha");
  if (spec.gamma[0] == 0.0) throw SpecError("ZeroGammaZero");
  return spec;
}

}  // namespace lyap
