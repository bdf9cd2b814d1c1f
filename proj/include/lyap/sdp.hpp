#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "lyap/core.hpp"

namespace lyap {

enum class VarKind { Free, Nonneg };  // box [-1,1] vs [0,1]

struct VarInfo {
  std::string name;
  VarKind kind = VarKind::Free;
};

// Affine symmetric-matrix expression F0 + sum_a z_a F_a over scalar
// decision variables; every F_a is symmetric and dense (sizes <= ~25).
struct MatrixExpr {
  int dim = 0;
  Eigen::MatrixXd F0;
  std::vector<std::pair<int, Eigen::MatrixXd>> terms;

  explicit MatrixExpr(int n = 0) : dim(n), F0(Eigen::MatrixXd::Zero(n, n)) {}
  void add(int var, const Eigen::MatrixXd& coeff) { terms.emplace_back(var, coeff); }
  Eigen::MatrixXd eval(const Eigen::VectorXd& z) const {
    Eigen::MatrixXd v = F0;
    for (const auto& [a, F] : terms) v += z[a] * F;
    return v;
  }
};

// Affine vector expression, read elementwise.
struct VectorExpr {
  int dim = 0;
  Eigen::VectorXd c0;
  std::vector<std::pair<int, Eigen::VectorXd>> terms;

  explicit VectorExpr(int n = 0) : dim(n), c0(Eigen::VectorXd::Zero(n)) {}
  void add(int var, const Eigen::VectorXd& coeff) { terms.emplace_back(var, coeff); }
  Eigen::VectorXd eval(const Eigen::VectorXd& z) const {
    Eigen::VectorXd v = c0;
    for (const auto& [a, c] : terms) v += z[a] * c;
    return v;
  }
};

// Senses: strict constraints are offset by the margin variable t, which the
// solver maximizes; non-strict constraints hold as-is.
enum class MatrixSense { GeqMarginI, LeqZero, GeqZero };
enum class VectorSense { GeqMargin1, LeqZero };

// Homogeneous LMI feasibility problem with box normalization: every
// variable is bounded by 1 in absolute value (Nonneg vars live in [0,1]),
// the margin t in [-1,1]. Strict feasibility of the original system is
// equivalent to max t > 0 over this normalized set.
struct SdpProblem {
  std::vector<VarInfo> vars;
  std::vector<std::pair<MatrixExpr, MatrixSense>> matrix_constraints;
  std::vector<std::pair<VectorExpr, VectorSense>> vector_constraints;

  int add_var(std::string name, VarKind kind) {
    vars.push_back({std::move(name), kind});
    return static_cast<int>(vars.size()) - 1;
  }
  int num_vars() const { return static_cast<int>(vars.size()); }
};

// Multiplier bookkeeping: ordered index pair over I_K, star encoded as -1.
struct PairKey {
  int i = 0;
  int j = 0;
  bool operator==(const PairKey& o) const { return i == o.i && j == o.j; }
};

std::string pair_token(int id);  // "star" for -1, decimal otherwise

// Variable layout of an assembled rate problem, used to extract structured
// certificates from the flat solver vector.
struct ProblemLayout {
  int state_dim = 0;                     // P is state_dim x state_dim
  int p_dim = 0;
  std::vector<int> P_idx;                // row-major upper triangle
  std::vector<int> p_idx;
  std::vector<std::pair<PairKey, int>> lambda_idx;
  std::vector<std::pair<PairKey, int>> eta_idx;
  std::vector<int> nu_idx;

  int P_var(int r, int c) const {        // r <= c
    int n = state_dim, k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j, ++k)
        if (i == r && j == c) return P_idx[k];
    throw SpecError("P index out of range");
  }
};

struct AssembledSdp {
  SdpProblem prob;
  ProblemLayout layout;
};

}  // namespace lyap
