#include "lyap/rate.hpp"

#include <cmath>

namespace lyap {

BisectResult bisect_feasible_rate(const std::function<AssembledSdp(double)>& build,
                                  const BisectOptions& opts) {
  if (!(opts.rho_max > opts.rho_min) || opts.tol_rho <= 0)
    throw SpecError("bad bisection bracket");
  SolveSettings probe_settings = opts.solve;
  probe_settings.early_exit_margin = opts.probe_early_exit;

  BisectResult res;
  auto probe = [&](double rho) {
    AssembledSdp asdp = build(rho);
    FeasibilityOutcome out = solve_feasibility(asdp.prob, probe_settings);
    res.history.push_back({rho, out.status, out.margin});
    if (out.status == SolveStatus::Unknown)
      throw BackendUnknown("solver returned unknown at rho=" + std::to_string(rho) +
                           " (" + out.diagnostics + ")");
    if (out.status == SolveStatus::Feasible) {
      res.rho_star = rho;
      res.assembled = std::move(asdp);
      res.outcome = std::move(out);
      return true;
    }
    return false;
  };

  if (!probe(opts.rho_max))
    throw NoCertificateWithinBracket("infeasible at rho_max=" +
                                     std::to_string(opts.rho_max));
  double lo = opts.rho_min, hi = opts.rho_max;
  while (hi - lo > opts.tol_rho) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid))
      hi = mid;
    else
      lo = mid;
  }
  return res;
}

RateCertificate bisect_rate(const MethodSpec& spec, const FunctionClass& fc,
                            const BisectOptions& opts) {
  validate(spec);
  if (!fc.valid()) throw SpecError("invalid function class");
  BisectResult res = bisect_feasible_rate(
      [&](double rho) { return build_rho_sdp(spec, fc, rho, opts.mode); }, opts);
  RateCertificate rc;
  rc.rho_star = res.rho_star;
  rc.bracket_history = std::move(res.history);
  rc.certificate = extract_certificate(res.assembled, res.outcome.values);
  rc.certificate.kind = "method";
  rc.certificate.rho = res.rho_star;
  rc.certificate.fc = fc;
  rc.certificate.mode = opts.mode;
  rc.certificate.spec = spec;
  rc.certificate.margin = res.outcome.margin;
  rc.certificate.solver_gap = res.outcome.margin_bound - res.outcome.margin;
  rc.certificate.newton_steps = res.outcome.newton_steps;
  rc.certificate.eps_feas = opts.solve.eps_feas;
  return rc;
}

std::vector<std::pair<double, std::optional<RateCertificate>>> sweep_rates(
    const std::function<MethodSpec(const FunctionClass&)>& family,
    const std::vector<double>& kappas, const BisectOptions& opts) {
  std::vector<std::pair<double, std::optional<RateCertificate>>> rows;
  for (double kappa : kappas) {
    const FunctionClass fc{1.0, kappa};
    try {
      rows.emplace_back(kappa, bisect_rate(family(fc), fc, opts));
    } catch (const std::exception&) {
      rows.emplace_back(kappa, std::nullopt);
    }
  }
  return rows;
}

std::vector<double> kappa_grid(double lo, double hi, int count, bool log_spaced) {
  if (count < 1 || lo <= 0 || hi < lo) throw SpecError("bad kappa grid");
  std::vector<double> out;
  if (count == 1) return {lo};
  for (int i = 0; i < count; ++i) {
    const double s = static_cast<double>(i) / (count - 1);
    out.push_back(log_spaced ? lo * std::pow(hi / lo, s) : lo + s * (hi - lo));
  }
  return out;
}

}  // namespace lyap
