#include "lyap/basis.hpp"

namespace lyap {

BasisWorkspace build_basis(int N, int K) {
  if (N < 0 || K < 0) throw SpecError("N and K must be nonnegative");
  BasisWorkspace ws;
  ws.N = N;
  ws.K = K;
  ws.cols = N + K + 2;
  ws.fcols = K + 1;
  const int n = ws.dim();
  ws.xbar.assign(N + K + 2, Eigen::RowVectorXd::Zero(n));
  ws.ybar.assign(K + 1, Eigen::RowVectorXd::Zero(n));
  ws.gbar.assign(K + 1, Eigen::RowVectorXd::Zero(n));
  ws.fbar.assign(K + 1, Eigen::RowVectorXd::Zero(ws.fcols));
  for (int k = -N; k <= 0; ++k) ws.xbar[k + N](k + N) = 1.0;       // e_{k+N+1}
  for (int k = 0; k <= K; ++k) ws.gbar[k](k + N + 1) = 1.0;        // e_{k+N+2}
  for (int k = 0; k <= K; ++k) ws.fbar[k](k) = 1.0;                // e_{k+1}
  return ws;
}

BasisWorkspace roll_method(const MethodSpec& spec, BasisWorkspace ws) {
  if (spec.degree != ws.N) throw SpecError("spec degree does not match workspace N");
  validate(spec);
  for (int k = 0; k <= ws.K; ++k) {
    Eigen::RowVectorXd y = Eigen::RowVectorXd::Zero(ws.dim());
    Eigen::RowVectorXd xn = Eigen::RowVectorXd::Zero(ws.dim());
    for (int j = 0; j <= ws.N; ++j) {
      y += spec.gamma[j] * ws.x(k - j);
      xn += spec.beta[j] * ws.x(k - j);
    }
    ws.ybar[k] = y;
    ws.xbar[k + 1 + ws.N] = xn - spec.alpha * ws.g(k);
  }
  ws.rolled = true;
  return ws;
}

}  // namespace lyap
