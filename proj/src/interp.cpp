#include "lyap/interp.hpp"

namespace lyap {

InterpKernel interpolation_kernel(const FunctionClass& fc) {
  if (!fc.valid()) throw SpecError("invalid function class");
  const double mu = fc.mu, L = fc.L;
  InterpKernel k;
  k.M << -mu * L, mu * L, mu, -L,
          mu * L, -mu * L, -mu, L,
          mu, -mu, -1.0, 1.0,
          -L, L, 1.0, -1.0;
  return k;
}

InterpPair interpolation_pair(const BasisWorkspace& ws, const InterpKernel& kernel,
                              const FunctionClass& fc, int i, int j) {
  if (i == j) throw SpecError("diagonal interpolation pair is identically zero");
  InterpPair out;
  out.i = i;
  out.j = j;
  Eigen::MatrixXd S(4, ws.dim());
  S.row(0) = ws.yrow(i);
  S.row(1) = ws.yrow(j);
  S.row(2) = ws.grow(i);
  S.row(3) = ws.grow(j);
  Eigen::MatrixXd Q = 0.5 * S.transpose() * kernel.M * S;
  out.Mij = 0.5 * (Q + Q.transpose());
  out.mij = (fc.L - fc.mu) * (ws.frow(i) - ws.frow(j));
  return out;
}

double phi_value(const std::vector<InterpPoint>& pts, const FunctionClass& fc,
                 int i, int j) {
  const InterpPoint& a = pts.at(i);
  const InterpPoint& b = pts.at(j);
  if (a.y.size() != b.y.size()) throw SpecError("point dimension mismatch");
  const Eigen::Matrix4d M = interpolation_kernel(fc).M;
  const Eigen::VectorXd* v[4] = {&a.y, &b.y, &a.g, &b.g};
  double quad = 0.0;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) quad += M(r, c) * v[r]->dot(*v[c]);
  return (fc.L - fc.mu) * (a.f - b.f) + 0.5 * quad;
}

bool interpolable(const std::vector<InterpPoint>& pts, const FunctionClass& fc,
                  double tol) {
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && phi_value(pts, fc, i, j) < -tol) return false;
  return true;
}

}  // namespace lyap
