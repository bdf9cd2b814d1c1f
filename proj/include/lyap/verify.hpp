#pragma once

#include <Eigen/Core>
#include <random>
#include <string>
#include <vector>

#include "lyap/certificate.hpp"
#include "lyap/core.hpp"
#include "lyap/interp.hpp"
#include "lyap/variants.hpp"

namespace lyap {

// ---------------------------------------------------------------------------
// Algebraic certificate checking

struct ConstraintResidual {
  std::string label;
  double slack = 0.0;  // signed; nonnegative means satisfied
  bool pass = false;
};

struct ResidualReport {
  std::vector<ConstraintResidual> constraints;
  double worst_matrix_slack = 0.0;
  double worst_vector_slack = 0.0;
  double worst_multiplier = 0.0;
  bool pass = false;
};

// Reassembles the feasibility program a certificate claims to solve.
AssembledSdp rebuild_problem(const LyapunovCertificate& cert);

// Flat solver vector matching the layout; multipliers are matched by index
// pair, not position. Throws on any dimension or key mismatch.
Eigen::VectorXd certificate_values(const LyapunovCertificate& cert,
                                   const ProblemLayout& lay);

// Substitutes the certificate into every constraint. Strict blocks must
// clear the certificate's own margin (up to tol); non-strict blocks and
// multiplier signs must hold up to tol.
ResidualReport check_certificate_algebraic(const LyapunovCertificate& cert,
                                           const AssembledSdp& problem, double tol);
ResidualReport check_certificate_algebraic(const LyapunovCertificate& cert, double tol);

// ---------------------------------------------------------------------------
// Concrete test functions

struct TestFunction {
  enum class Kind { Quadratic, LogSumExp, SlaterTridiagonal };
  Kind kind = Kind::Quadratic;
  FunctionClass fc;
  int dim = 0;

  Eigen::MatrixXd H;      // quadratic kinds: f = 1/2 (x-shift)^T H (x-shift)
  Eigen::VectorXd shift;
  Eigen::MatrixXd A;      // log-sum-exp: tau * lse((Ax+b)/tau) + mu/2 |x|^2
  Eigen::VectorXd b;
  double tau = 1.0;

  Eigen::VectorXd x_star;
  double f_star = 0.0;

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;
};

TestFunction make_quadratic(const Eigen::MatrixXd& H, const Eigen::VectorXd& shift);

// Spectrum includes both endpoints mu and L; remaining eigenvalues
// log-uniform in between, basis Haar-random, minimizer Gaussian.
TestFunction random_quadratic(const FunctionClass& fc, int d, std::mt19937_64& rng);

// Row matrix rescaled so the analytic Hessian bound mu + smax(A)^2/tau
// equals L exactly; minimizer located by Newton at construction.
TestFunction random_log_sum_exp(const FunctionClass& fc, int d, int terms,
                                std::mt19937_64& rng);

// Tridiagonal (2 on the diagonal, 1 off) rescaled to spectrum [mu, L] via
// the closed-form extreme eigenvalues 2 -+ 2 cos(pi/(d+1)).
TestFunction slater_function(const FunctionClass& fc, int d);

// ---------------------------------------------------------------------------
// Simulation

// x_init holds x_{-N}..x_0 in chronological order.
Trajectory simulate_method(const MethodSpec& spec, const TestFunction& f,
                           const std::vector<Eigen::VectorXd>& x_init, int iters);

// Exact line search along -g_k (steepest descent).
Trajectory simulate_els_gd(const TestFunction& f, const Eigen::VectorXd& x0, int iters);

// Exact minimization over x_k + span{x_k - x_{k-1}, g_k}.
Trajectory simulate_els_hbm(const TestFunction& f, const Eigen::VectorXd& x0, int iters);

// Accelerated cycles of sched.n_inner unit-step gradient iterations with
// momentum reset; the trajectory holds one point per cycle boundary.
Trajectory simulate_restart(const TestFunction& f, const RestartSchedule& sched,
                            const Eigen::VectorXd& x0, int cycles);

// Sampled triples (y_k, g_k, f_k) for k = 0..K plus the stationary point.
std::vector<InterpPoint> sample_points(const Trajectory& traj, int K);

// ---------------------------------------------------------------------------
// Lyapunov decrease on trajectories

// V at index k: state stacks the last state_dim/2 iterates (x - x_star) and
// gradients, gradients and value gaps divided by L to match the stored
// normalization. Restart certificates read cycle-boundary trajectories.
double lyapunov_value(const LyapunovCertificate& cert, const Trajectory& traj, int k);

struct DecreaseReport {
  bool pass = false;
  bool nonneg_pass = false;
  bool step_pass = false;
  bool telescope_pass = false;
  double v_start = 0.0;
  double min_value = 0.0;         // most negative V seen
  double worst_step = 0.0;        // max of V_{k+1} - rho^2 V_k - slack
  double worst_telescope = 0.0;   // max of V_k - telescoped bound
  int steps = 0;
};

DecreaseReport check_decrease_on_trajectory(const LyapunovCertificate& cert,
                                            const Trajectory& traj, double tol);

// ---------------------------------------------------------------------------
// Oracles and fixtures

// Max spectral radius of the per-eigenvalue companion recursion over a
// log grid on [mu, L], golden-section refined near the arg max. Lower
// bound on the true worst-case rate.
double quadratic_worst_rate(const MethodSpec& spec, const FunctionClass& fc,
                            int grid_size = 200);

// Unit-vector initial conditions on the rescaled tridiagonal quadratic;
// produces a strictly feasible Gram matrix for any valid spec.
Trajectory slater_trajectory(const MethodSpec& spec, const FunctionClass& fc, int K,
                             int d);

// B = [x_{-N}-x* ... x_0-x*  g_0 ... g_K], one column per basis row.
Eigen::MatrixXd basis_matrix(const Trajectory& traj, int K);
Eigen::MatrixXd gram_matrix(const Trajectory& traj, int K);  // B^T B
Eigen::VectorXd value_vector(const Trajectory& traj, int K); // f_k - f_star

}  // namespace lyap
