#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace lyap {

// Class of L-smooth, mu-strongly convex functions; kappa = L/mu.
struct FunctionClass {
  double mu = 1.0;
  double L = 1.0;

  double kappa() const { return L / mu; }
  bool valid() const {
    return mu > 0.0 && L >= mu && std::isfinite(mu) && std::isfinite(L);
  }
};

// Fixed-step method with memory N:
//   y_k     = sum_j gamma[j] x_{k-j}
//   x_{k+1} = sum_j beta[j]  x_{k-j} - alpha grad f(y_k)
// Invariants: sum(beta) = sum(gamma) = 1, alpha != 0, gamma[0] != 0.
struct MethodSpec {
  int degree = 0;  // N
  double alpha = 0.0;
  Eigen::VectorXd beta;   // size N+1
  Eigen::VectorXd gamma;  // size N+1
};

enum class Preset { GM, HBM, FGM, TMM };

Preset preset_from_name(const std::string& name);
std::string preset_name(Preset p);

// Standard tunings, in the two-coefficient momentum form
//   beta = (1+b, -b), gamma = (1+c, -c); GM has N=0.
MethodSpec make_preset(Preset which, const FunctionClass& fc);

struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Returns spec unchanged iff all invariants hold; throws SpecError
// ("SumNotOne(beta)", "SumNotOne(gamma)", "ZeroAlpha", "ZeroGammaZero").
const MethodSpec& validate(const MethodSpec& spec);

// Concrete run of a method on some f: iterates x_{-N..T+1}, probe points
// y_{0..T}, gradients g_{0..T}, values f_{0..T}, plus the optimizer data.
struct Trajectory {
  int N = 0;
  int d = 0;
  std::vector<Eigen::VectorXd> xs;  // index k+N, k = -N..T+1
  std::vector<Eigen::VectorXd> ys;  // index k,   k = 0..T
  std::vector<Eigen::VectorXd> gs;
  std::vector<double> fs;
  Eigen::VectorXd x_star;
  double f_star = 0.0;

  int horizon() const { return static_cast<int>(ys.size()) - 1; }
  const Eigen::VectorXd& x(int k) const { return xs.at(k + N); }
  const Eigen::VectorXd& y(int k) const { return ys.at(k); }
  const Eigen::VectorXd& g(int k) const { return gs.at(k); }
  double f(int k) const { return fs.at(k); }
};

}  // namespace lyap
