#pragma once

#include <Eigen/Core>
#include <vector>

#include "lyap/core.hpp"

namespace lyap {

// Coordinate-free row-vector representation of a run up to horizon K.
// Rows for iterates/probe points/gradients live in R^{N+K+2}, rows for
// function values in R^{K+1}; the fixed point maps to zero rows.
//
// Initial layout (unit rows): xbar[k] = e_{k+N+1} for k = -N..0,
// gbar[k] = e_{k+N+2}, fbar[k] = e_{k+1} (1-based) for k = 0..K.
// roll_method fills ybar[0..K] and xbar[1..K+1]; xbar[K+1] is always
// produced since the decrease condition looks one step past the horizon.
struct BasisWorkspace {
  int N = 0;
  int K = 0;
  int cols = 0;   // row length; N+K+2 for the standard layout
  int fcols = 0;  // value-row length; K+1 for the standard layout
  bool rolled = false;
  std::vector<Eigen::RowVectorXd> xbar;  // index k+N, k = -N..K+1
  std::vector<Eigen::RowVectorXd> ybar;  // index k, k = 0..K
  std::vector<Eigen::RowVectorXd> gbar;
  std::vector<Eigen::RowVectorXd> fbar;

  int dim() const { return cols; }
  const Eigen::RowVectorXd& x(int k) const { return xbar.at(k + N); }
  const Eigen::RowVectorXd& y(int k) const { return ybar.at(k); }
  const Eigen::RowVectorXd& g(int k) const { return gbar.at(k); }
  const Eigen::RowVectorXd& f(int k) const { return fbar.at(k); }
  Eigen::RowVectorXd star_row() const { return Eigen::RowVectorXd::Zero(dim()); }
  Eigen::RowVectorXd star_frow() const { return Eigen::RowVectorXd::Zero(fcols); }

  // Index set I_K = {0..K, star}; star encoded as -1.
  std::vector<int> index_set() const {
    std::vector<int> ids;
    for (int k = 0; k <= K; ++k) ids.push_back(k);
    ids.push_back(kStarIndex);
    return ids;
  }
  static constexpr int kStarIndex = -1;

  const Eigen::RowVectorXd yrow(int id) const { return id == kStarIndex ? star_row() : y(id); }
  const Eigen::RowVectorXd grow(int id) const { return id == kStarIndex ? star_row() : g(id); }
  const Eigen::RowVectorXd frow(int id) const { return id == kStarIndex ? star_frow() : f(id); }
};

BasisWorkspace build_basis(int N, int K);

// Populates ybar[k] and xbar[k+1] for k = 0..K by the method recursion.
BasisWorkspace roll_method(const MethodSpec& spec, BasisWorkspace ws);

}  // namespace lyap
