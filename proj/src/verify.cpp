#include "lyap/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace lyap {

namespace {

double min_eig(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eig(const Eigen::MatrixXd& S) { return -min_eig(-S); }

}  // namespace

AssembledSdp rebuild_problem(const LyapunovCertificate& cert) {
  if (cert.kind == "method")
    return build_rho_sdp(cert.spec, cert.fc, cert.rho, cert.mode);
  if (cert.kind == "els-gd") return build_els_gd_sdp(cert.fc, cert.rho);
  if (cert.kind == "els-hbm") return build_els_hbm_sdp(cert.fc, cert.rho);
  if (cert.kind == "restart")
    return build_restart_sdp(cert.fc, momentum_sequence(cert.n_inner), cert.rho);
  throw SpecError("unknown certificate kind: " + cert.kind);
}

Eigen::VectorXd certificate_values(const LyapunovCertificate& cert,
                                   const ProblemLayout& lay) {
  if (cert.P.rows() != lay.state_dim || cert.p.size() != lay.p_dim)
    throw SpecError("certificate dimensions do not match problem");
  int total = static_cast<int>(lay.P_idx.size() + lay.p_idx.size() +
                               lay.lambda_idx.size() + lay.eta_idx.size() +
                               lay.nu_idx.size());
  Eigen::VectorXd z = Eigen::VectorXd::Zero(total);
  int k = 0;
  for (int r = 0; r < lay.state_dim; ++r)
    for (int c = r; c < lay.state_dim; ++c, ++k) z[lay.P_idx[k]] = cert.P(r, c);
  for (int r = 0; r < lay.p_dim; ++r) z[lay.p_idx[r]] = cert.p[r];

  auto match = [](const std::vector<std::pair<PairKey, double>>& stored,
                  const PairKey& key, const char* what) {
    for (const auto& [k2, v] : stored)
      if (k2 == key) return v;
    throw SpecError(std::string("certificate missing ") + what + " multiplier");
  };
  if (cert.lambda.size() != lay.lambda_idx.size() ||
      cert.eta.size() != lay.eta_idx.size() || cert.nu.size() != lay.nu_idx.size())
    throw SpecError("certificate multiplier counts do not match problem");
  for (const auto& [key, idx] : lay.lambda_idx)
    z[idx] = match(cert.lambda, key, "lambda");
  for (const auto& [key, idx] : lay.eta_idx) z[idx] = match(cert.eta, key, "eta");
  for (size_t i = 0; i < lay.nu_idx.size(); ++i) z[lay.nu_idx[i]] = cert.nu[i];
  return z;
}

ResidualReport check_certificate_algebraic(const LyapunovCertificate& cert,
                                           const AssembledSdp& problem, double tol) {
  const Eigen::VectorXd z = certificate_values(cert, problem.layout);
  ResidualReport rep;
  rep.worst_matrix_slack = rep.worst_vector_slack = rep.worst_multiplier = 1e300;

  int mi = 0;
  for (const auto& [expr, sense] : problem.prob.matrix_constraints) {
    const Eigen::MatrixXd S = expr.eval(z);
    double slack = 0.0;
    switch (sense) {
      case MatrixSense::GeqMarginI: slack = min_eig(S) - cert.margin; break;
      case MatrixSense::LeqZero: slack = -max_eig(S); break;
      case MatrixSense::GeqZero: slack = min_eig(S); break;
    }
    rep.constraints.push_back({"matrix[" + std::to_string(mi++) + "]", slack,
                               slack >= -tol});
    rep.worst_matrix_slack = std::min(rep.worst_matrix_slack, slack);
  }
  int vi = 0;
  for (const auto& [expr, sense] : problem.prob.vector_constraints) {
    const Eigen::VectorXd v = expr.eval(z);
    const double slack = (sense == VectorSense::GeqMargin1)
                             ? v.minCoeff() - cert.margin
                             : -v.maxCoeff();
    rep.constraints.push_back({"vector[" + std::to_string(vi++) + "]", slack,
                               slack >= -tol});
    rep.worst_vector_slack = std::min(rep.worst_vector_slack, slack);
  }
  for (int a = 0; a < problem.prob.num_vars(); ++a) {
    if (problem.prob.vars[a].kind != VarKind::Nonneg) continue;
    rep.worst_multiplier = std::min(rep.worst_multiplier, z[a]);
  }
  rep.constraints.push_back(
      {"multipliers", rep.worst_multiplier, rep.worst_multiplier >= -tol});

  rep.pass = true;
  for (const auto& c : rep.constraints) rep.pass = rep.pass && c.pass;
  return rep;
}

ResidualReport check_certificate_algebraic(const LyapunovCertificate& cert,
                                           double tol) {
  return check_certificate_algebraic(cert, rebuild_problem(cert), tol);
}

// ---------------------------------------------------------------------------

double TestFunction::value(const Eigen::VectorXd& x) const {
  switch (kind) {
    case Kind::Quadratic:
    case Kind::SlaterTridiagonal: {
      const Eigen::VectorXd r = x - shift;
      return 0.5 * r.dot(H * r);
    }
    case Kind::LogSumExp: {
      const Eigen::VectorXd a = (A * x + b) / tau;
      const double m = a.maxCoeff();
      return tau * (m + std::log((a.array() - m).exp().sum())) +
             0.5 * fc.mu * x.squaredNorm();
    }
  }
  return 0.0;
}

Eigen::VectorXd TestFunction::gradient(const Eigen::VectorXd& x) const {
  switch (kind) {
    case Kind::Quadratic:
    case Kind::SlaterTridiagonal: return H * (x - shift);
    case Kind::LogSumExp: {
      const Eigen::VectorXd a = (A * x + b) / tau;
      const double m = a.maxCoeff();
      Eigen::VectorXd s = (a.array() - m).exp();
      s /= s.sum();
      return A.transpose() * s + fc.mu * x;
    }
  }
  return Eigen::VectorXd::Zero(dim);
}

Eigen::MatrixXd TestFunction::hessian(const Eigen::VectorXd& x) const {
  switch (kind) {
    case Kind::Quadratic:
    case Kind::SlaterTridiagonal: return H;
    case Kind::LogSumExp: {
      const Eigen::VectorXd a = (A * x + b) / tau;
      const double m = a.maxCoeff();
      Eigen::VectorXd s = (a.array() - m).exp();
      s /= s.sum();
      const Eigen::MatrixXd As = A.transpose() * s.asDiagonal() * A;
      const Eigen::VectorXd mean = A.transpose() * s;
      return (As - mean * mean.transpose()) / tau +
             fc.mu * Eigen::MatrixXd::Identity(dim, dim);
    }
  }
  return Eigen::MatrixXd::Zero(dim, dim);
}

TestFunction make_quadratic(const Eigen::MatrixXd& H, const Eigen::VectorXd& shift) {
  TestFunction f;
  f.kind = TestFunction::Kind::Quadratic;
  f.dim = static_cast<int>(H.rows());
  f.H = 0.5 * (H + H.transpose());
  f.shift = shift;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f.H, Eigen::EigenvaluesOnly);
  f.fc = {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
  f.x_star = shift;
  f.f_star = 0.0;
  return f;
}

TestFunction random_quadratic(const FunctionClass& fc, int d, std::mt19937_64& rng) {
  if (d < 2) throw SpecError("need d >= 2 to pin both spectrum endpoints");
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd eigs(d);
  eigs[0] = fc.mu;
  eigs[1] = fc.L;
  for (int i = 2; i < d; ++i)
    eigs[i] = fc.mu * std::pow(fc.L / fc.mu, unif(rng));
  Eigen::MatrixXd Z(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) Z(r, c) = gauss(rng);
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Z).householderQ();
  Eigen::VectorXd shift(d);
  for (int i = 0; i < d; ++i) shift[i] = gauss(rng);
  TestFunction f = make_quadratic(Q * eigs.asDiagonal() * Q.transpose(), shift);
  f.fc = fc;  // exact endpoints by construction; avoid eigensolver roundoff
  return f;
}

TestFunction random_log_sum_exp(const FunctionClass& fc, int d, int terms,
                                std::mt19937_64& rng) {
  if (terms < 2) throw SpecError("need at least two affine terms");
  std::normal_distribution<double> gauss(0.0, 1.0);
  TestFunction f;
  f.kind = TestFunction::Kind::LogSumExp;
  f.dim = d;
  f.fc = fc;
  f.tau = 1.0;
  f.A.resize(terms, d);
  f.b.resize(terms);
  for (int r = 0; r < terms; ++r) {
    for (int c = 0; c < d; ++c) f.A(r, c) = gauss(rng);
    f.b[r] = gauss(rng);
  }
  const double smax = f.A.jacobiSvd().singularValues()[0];
  f.A *= std::sqrt((fc.L - fc.mu) * f.tau) / smax;

  // Newton with backtracking; strong convexity makes this globally safe.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
  for (int it = 0; it < 200; ++it) {
    const Eigen::VectorXd g = f.gradient(x);
    if (g.norm() <= 1e-14 * std::max(1.0, x.norm())) break;
    const Eigen::VectorXd step = f.hessian(x).ldlt().solve(g);
    double s = 1.0;
    const double fx = f.value(x);
    while (s > 1e-12 && f.value(x - s * step) > fx) s *= 0.5;
    x -= s * step;
  }
  f.x_star = x;
  f.f_star = f.value(x);
  return f;
}

TestFunction slater_function(const FunctionClass& fc, int d) {
  if (d < 1) throw SpecError("dimension must be positive");
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    H(i, i) = 2.0;
    if (i + 1 < d) H(i, i + 1) = H(i + 1, i) = 1.0;
  }
  const double lmax = 2.0 + 2.0 * std::cos(M_PI / (d + 1));
  const double lmin = 2.0 - 2.0 * std::cos(M_PI / (d + 1));
  const Eigen::MatrixXd Ht =
      (H - lmin * Eigen::MatrixXd::Identity(d, d)) * ((fc.L - fc.mu) / (lmax - lmin)) +
      fc.mu * Eigen::MatrixXd::Identity(d, d);
  TestFunction f = make_quadratic(Ht, Eigen::VectorXd::Zero(d));
  f.kind = TestFunction::Kind::SlaterTridiagonal;
  f.fc = fc;
  return f;
}

// ---------------------------------------------------------------------------

Trajectory simulate_method(const MethodSpec& spec, const TestFunction& f,
                           const std::vector<Eigen::VectorXd>& x_init, int iters) {
  validate(spec);
  const int N = spec.degree;
  if (static_cast<int>(x_init.size()) != N + 1)
    throw SpecError("x_init must hold N+1 vectors");
  if (iters < 0) throw SpecError("iters must be nonnegative");
  Trajectory traj;
  traj.N = N;
  traj.d = f.dim;
  traj.x_star = f.x_star;
  traj.f_star = f.f_star;
  traj.xs = x_init;
  for (int k = 0; k <= iters; ++k) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(f.dim);
    Eigen::VectorXd xn = Eigen::VectorXd::Zero(f.dim);
    for (int j = 0; j <= N; ++j) {
      y += spec.gamma[j] * traj.x(k - j);
      xn += spec.beta[j] * traj.x(k - j);
    }
    traj.ys.push_back(y);
    traj.gs.push_back(f.gradient(y));
    traj.fs.push_back(f.value(y));
    traj.xs.push_back(xn - spec.alpha * traj.gs.back());
  }
  return traj;
}

namespace {

// Exact minimizer of f over x + span(cols of D); Newton in the reduced
// coordinates, one step exact on quadratics. Near-zero directions are
// dropped so converged runs stay finite.
Eigen::VectorXd subspace_minimize(const TestFunction& f, const Eigen::VectorXd& x,
                                  Eigen::MatrixXd D) {
  std::vector<int> keep;
  for (int c = 0; c < D.cols(); ++c)
    if (D.col(c).norm() > 1e-150) keep.push_back(c);
  if (keep.empty()) return x;
  Eigen::MatrixXd Dk(D.rows(), static_cast<int>(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c) Dk.col(static_cast<int>(c)) = D.col(keep[c]);
  for (int c = 0; c < Dk.cols(); ++c) Dk.col(c) /= Dk.col(c).norm();

  Eigen::VectorXd xt = x;
  for (int it = 0; it < 100; ++it) {
    const Eigen::VectorXd g = Dk.transpose() * f.gradient(xt);
    if (g.norm() <= 1e-15 * std::max(1.0, f.gradient(x).norm())) break;
    const Eigen::MatrixXd Hr = Dk.transpose() * f.hessian(xt) * Dk;
    const Eigen::VectorXd w = Hr.ldlt().solve(g);
    double s = 1.0;
    const double fx = f.value(xt);
    while (s > 1e-12 && f.value(xt - s * (Dk * w)) > fx) s *= 0.5;
    xt -= s * (Dk * w);
    if (f.kind != TestFunction::Kind::LogSumExp) break;  // quadratic: one step
  }
  return xt;
}

void push_point(Trajectory& traj, const TestFunction& f, const Eigen::VectorXd& x) {
  traj.ys.push_back(x);
  traj.gs.push_back(f.gradient(x));
  traj.fs.push_back(f.value(x));
}

}  // namespace

Trajectory simulate_els_gd(const TestFunction& f, const Eigen::VectorXd& x0,
                           int iters) {
  Trajectory traj;
  traj.N = 0;
  traj.d = f.dim;
  traj.x_star = f.x_star;
  traj.f_star = f.f_star;
  traj.xs.push_back(x0);
  for (int k = 0; k <= iters; ++k) {
    push_point(traj, f, traj.xs.back());
    traj.xs.push_back(subspace_minimize(f, traj.xs.back(), traj.gs.back()));
  }
  return traj;
}

Trajectory simulate_els_hbm(const TestFunction& f, const Eigen::VectorXd& x0,
                            int iters) {
  Trajectory traj;
  traj.N = 0;
  traj.d = f.dim;
  traj.x_star = f.x_star;
  traj.f_star = f.f_star;
  traj.xs.push_back(x0);
  for (int k = 0; k <= iters; ++k) {
    push_point(traj, f, traj.xs.back());
    Eigen::MatrixXd D(f.dim, k == 0 ? 1 : 2);
    D.col(0) = traj.gs.back();
    if (k > 0) D.col(1) = traj.xs[k] - traj.xs[k - 1];
    traj.xs.push_back(subspace_minimize(f, traj.xs.back(), D));
  }
  return traj;
}

Trajectory simulate_restart(const TestFunction& f, const RestartSchedule& sched,
                            const Eigen::VectorXd& x0, int cycles) {
  if (sched.n_inner < 1) throw SpecError("restart period must be positive");
  Trajectory traj;
  traj.N = 0;
  traj.d = f.dim;
  traj.x_star = f.x_star;
  traj.f_star = f.f_star;
  Eigen::VectorXd ystart = x0;
  for (int c = 0; c <= cycles; ++c) {
    traj.xs.push_back(ystart);
    push_point(traj, f, ystart);
    Eigen::VectorXd y = ystart, z = ystart;
    for (int i = 0; i < sched.n_inner; ++i) {
      const Eigen::VectorXd zn = y - f.gradient(y) / f.fc.L;
      y = zn + ((sched.theta[i] - 1.0) / sched.theta[i + 1]) * (zn - z);
      z = zn;
    }
    ystart = y;
  }
  return traj;
}

std::vector<InterpPoint> sample_points(const Trajectory& traj, int K) {
  std::vector<InterpPoint> pts;
  for (int k = 0; k <= K; ++k)
    pts.push_back({traj.y(k) - traj.x_star, traj.g(k), traj.f(k) - traj.f_star});
  pts.push_back({Eigen::VectorXd::Zero(traj.d), Eigen::VectorXd::Zero(traj.d), 0.0});
  return pts;
}

// ---------------------------------------------------------------------------

double lyapunov_value(const LyapunovCertificate& cert, const Trajectory& traj, int k) {
  const int m = static_cast<int>(cert.P.rows()) / 2;
  const double L = cert.fc.L;
  std::vector<Eigen::VectorXd> u;
  for (int r = 0; r < m; ++r) u.push_back(traj.x(k - r) - traj.x_star);
  for (int r = 0; r < m; ++r) u.push_back(traj.g(k - r) / L);
  double v = 0.0;
  for (int r = 0; r < 2 * m; ++r)
    for (int c = 0; c < 2 * m; ++c) v += cert.P(r, c) * u[r].dot(u[c]);
  for (int r = 0; r < cert.p.size(); ++r)
    v += cert.p[r] * (traj.f(k - r) - traj.f_star) / L;
  return v;
}

DecreaseReport check_decrease_on_trajectory(const LyapunovCertificate& cert,
                                            const Trajectory& traj, double tol) {
  const int m = static_cast<int>(cert.P.rows()) / 2;
  const int k0 = m - 1;
  const int T = traj.horizon();
  if (T < k0 + 1) throw SpecError("trajectory too short for decrease check");

  const double rho_cycle =
      cert.kind == "restart" ? std::pow(cert.rho, cert.n_inner) : cert.rho;
  const double rr = rho_cycle * rho_cycle;

  DecreaseReport rep;
  rep.steps = T - k0;
  std::vector<double> vs;
  for (int k = k0; k <= T; ++k) vs.push_back(lyapunov_value(cert, traj, k));
  rep.v_start = vs.front();
  rep.min_value = *std::min_element(vs.begin(), vs.end());
  rep.nonneg_pass = rep.min_value >= -tol * std::max(1.0, rep.v_start);

  rep.worst_step = -1e300;
  for (size_t i = 0; i + 1 < vs.size(); ++i)
    rep.worst_step = std::max(
        rep.worst_step, vs[i + 1] - rr * vs[i] - tol * std::max(1.0, vs[i]));
  rep.step_pass = rep.worst_step <= 0.0;

  rep.worst_telescope = -1e300;
  double factor = 1.0;
  const double slack = tol * std::max(1.0, rep.v_start);
  for (size_t i = 0; i < vs.size(); ++i, factor *= rr)
    rep.worst_telescope =
        std::max(rep.worst_telescope, vs[i] - factor * rep.v_start - slack);
  rep.telescope_pass = rep.worst_telescope <= 0.0;

  rep.pass = rep.nonneg_pass && rep.step_pass && rep.telescope_pass;
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

double companion_radius(const MethodSpec& spec, double h) {
  const int N = spec.degree;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int j = 0; j <= N; ++j)
    C(0, j) = spec.beta[j] - spec.alpha * h * spec.gamma[j];
  if (N > 0) C.block(1, 0, N, N).setIdentity();
  return Eigen::EigenSolver<Eigen::MatrixXd>(C, false).eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

double quadratic_worst_rate(const MethodSpec& spec, const FunctionClass& fc,
                            int grid_size) {
  validate(spec);
  if (grid_size < 2) throw SpecError("grid_size must be at least 2");
  std::vector<double> grid;
  for (int i = 0; i < grid_size; ++i)
    grid.push_back(fc.mu * std::pow(fc.L / fc.mu,
                                    static_cast<double>(i) / (grid_size - 1)));
  int best = 0;
  double best_r = -1.0;
  for (int i = 0; i < grid_size; ++i) {
    const double r = companion_radius(spec, grid[i]);
    if (r > best_r) {
      best_r = r;
      best = i;
    }
  }
  // golden-section refinement on the bracketing cells
  double lo = grid[std::max(0, best - 1)];
  double hi = grid[std::min(grid_size - 1, best + 1)];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, bnd = hi;
  double c1 = bnd - invphi * (bnd - a), c2 = a + invphi * (bnd - a);
  double f1 = companion_radius(spec, c1), f2 = companion_radius(spec, c2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {  // maximize
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + invphi * (bnd - a);
      f2 = companion_radius(spec, c2);
    } else {
      bnd = c2;
      c2 = c1;
      f2 = f1;
      c1 = bnd - invphi * (bnd - a);
      f1 = companion_radius(spec, c1);
    }
  }
  return std::max({best_r, f1, f2});
}

Trajectory slater_trajectory(const MethodSpec& spec, const FunctionClass& fc, int K,
                             int d) {
  validate(spec);
  const int N = spec.degree;
  if (d < N + K + 2) throw SpecError("d must be at least N+K+2");
  const TestFunction f = slater_function(fc, d);
  std::vector<Eigen::VectorXd> x_init;
  for (int i = -N; i <= 0; ++i) x_init.push_back(Eigen::VectorXd::Unit(d, N + i));
  return simulate_method(spec, f, x_init, K);
}

Eigen::MatrixXd basis_matrix(const Trajectory& traj, int K) {
  if (traj.horizon() < K) throw SpecError("trajectory too short");
  Eigen::MatrixXd B(traj.d, traj.N + K + 2);
  int c = 0;
  for (int k = -traj.N; k <= 0; ++k) B.col(c++) = traj.x(k) - traj.x_star;
  for (int k = 0; k <= K; ++k) B.col(c++) = traj.g(k);
  return B;
}

Eigen::MatrixXd gram_matrix(const Trajectory& traj, int K) {
  const Eigen::MatrixXd B = basis_matrix(traj, K);
  return B.transpose() * B;
}

Eigen::VectorXd value_vector(const Trajectory& traj, int K) {
  if (traj.horizon() < K) throw SpecError("trajectory too short");
  Eigen::VectorXd f(K + 1);
  for (int k = 0; k <= K; ++k) f[k] = traj.f(k) - traj.f_star;
  return f;
}

}  // namespace lyap
