#pragma once

#include <Eigen/Core>
#include <vector>

#include "lyap/basis.hpp"
#include "lyap/core.hpp"

namespace lyap {

// 4x4 kernel of the smooth strongly convex interpolation inequality,
// in block order (y_i, y_j, g_i, g_j). Scaling (mu,L) -> (c mu, c L)
// acts by congruence with diag(c, c, 1, 1).
struct InterpKernel {
  Eigen::Matrix4d M;
};

InterpKernel interpolation_kernel(const FunctionClass& fc);

// Symbolic quadratic/linear pair for indices (i, j) in I_K:
//   Mij = sym(1/2 S^T M S) with S = (ybar_i; ybar_j; gbar_i; gbar_j),
//   mij = (L - mu)(fbar_i - fbar_j).
struct InterpPair {
  int i = 0;
  int j = 0;
  Eigen::MatrixXd Mij;
  Eigen::RowVectorXd mij;
};

InterpPair interpolation_pair(const BasisWorkspace& ws, const InterpKernel& kernel,
                              const FunctionClass& fc, int i, int j);

// One sampled point of a function: probe location, gradient, value.
struct InterpPoint {
  Eigen::VectorXd y;
  Eigen::VectorXd g;
  double f = 0.0;
};

// phi_ij = (L-mu)(f_i-f_j) + 1/2 v^T (M (x) I_d) v, v = (y_i; y_j; g_i; g_j).
// The set is consistent with some member of the class iff phi_ij >= 0 for
// all ordered pairs.
double phi_value(const std::vector<InterpPoint>& pts, const FunctionClass& fc,
                 int i, int j);

bool interpolable(const std::vector<InterpPoint>& pts, const FunctionClass& fc,
                  double tol);

}  // namespace lyap
