#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "lyap/assemble.hpp"
#include "lyap/core.hpp"
#include "lyap/sdp.hpp"

namespace lyap {

// A Lyapunov rate certificate: V(state) = u^T (P x I_d) u + p^T fgap
// contracts by rho^2 per step (rho^{2N} per restart cycle). Values are
// stored for the L-normalized class (mu/L, 1) with alpha scaled by L;
// consumers evaluating V on raw trajectories divide gradients and value
// gaps by L. rho itself is scale-invariant.
struct LyapunovCertificate {
  std::string kind = "method";  // method | els-gd | els-hbm | restart
  double rho = 0.0;
  FunctionClass fc;
  Restriction mode = Restriction::None;
  MethodSpec spec;    // kind == method
  int n_inner = 0;    // kind == restart
  Eigen::MatrixXd P;
  Eigen::VectorXd p;
  std::vector<std::pair<PairKey, double>> lambda;
  std::vector<std::pair<PairKey, double>> eta;
  std::vector<double> nu;
  double margin = 0.0;
  double solver_gap = 0.0;
  int newton_steps = 0;
  double eps_feas = 0.0;
};

// Pull structured values out of the flat solver vector.
LyapunovCertificate extract_certificate(const AssembledSdp& asdp,
                                        const Eigen::VectorXd& values);

// Flat key/value JSON document, 17 significant digits.
std::string serialize_certificate(const LyapunovCertificate& cert);
LyapunovCertificate parse_certificate(const std::string& text);

}  // namespace lyap
