#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lyap/assemble.hpp"
#include "lyap/certificate.hpp"
#include "lyap/solver.hpp"

namespace lyap {

struct NoCertificateWithinBracket : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BackendUnknown : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BisectOptions {
  double tol_rho = 1e-4;
  double rho_max = 1.5;
  double rho_min = 0.0;
  Restriction mode = Restriction::None;
  SolveSettings solve;
  double probe_early_exit = 1e-4;  // margin at which probes stop refining
};

struct ProbeRecord {
  double rho = 0.0;
  SolveStatus status = SolveStatus::Unknown;
  double margin = 0.0;
};

struct RateCertificate {
  double rho_star = 0.0;
  LyapunovCertificate certificate;
  std::vector<ProbeRecord> bracket_history;
};

// Generic monotone bisection on [rho_min, rho_max]: probes rho_max first
// (NoCertificateWithinBracket if infeasible there), halves the bracket to
// tol_rho, and returns the smallest feasible probe with its solution.
// Unknown outcomes abort with BackendUnknown.
struct BisectResult {
  double rho_star = 0.0;
  AssembledSdp assembled;            // problem at rho_star
  FeasibilityOutcome outcome;        // solution at rho_star
  std::vector<ProbeRecord> history;
};

BisectResult bisect_feasible_rate(const std::function<AssembledSdp(double)>& build,
                                  const BisectOptions& opts);

// Rate certification for a fixed-step method.
RateCertificate bisect_rate(const MethodSpec& spec, const FunctionClass& fc,
                            const BisectOptions& opts = {});

// One bisect_rate per kappa at (mu, L) = (1, kappa); failures recorded as
// empty entries so sweeps continue past bad rows.
std::vector<std::pair<double, std::optional<RateCertificate>>> sweep_rates(
    const std::function<MethodSpec(const FunctionClass&)>& family,
    const std::vector<double>& kappas, const BisectOptions& opts = {});

std::vector<double> kappa_grid(double lo, double hi, int count, bool log_spaced);

}  // namespace lyap
