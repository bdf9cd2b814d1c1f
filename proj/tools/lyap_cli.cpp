#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lyap/rate.hpp"
#include "lyap/variants.hpp"
#include "lyap/verify.hpp"

namespace {

using namespace lyap;

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string format_row(const std::vector<double>& vals) {
  std::string line;
  for (size_t i = 0; i < vals.size(); ++i) {
    if (i) line += ' ';
    line += fmt12(vals[i]);
  }
  return line;
}

Eigen::VectorXd parse_list(const std::string& s) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
  Eigen::VectorXd v(static_cast<int>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) v[static_cast<int>(i)] = vals[i];
  return v;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> vals;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) vals.push_back(std::stoi(tok));
  return vals;
}

// min:max:count with optional log|lin suffix on count (default lin)
std::vector<double> parse_kappa_grid(const std::string& s) {
  const auto c1 = s.find(':');
  const auto c2 = s.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw SpecError("kappa grid must be min:max:count[log|lin]");
  const double lo = std::stod(s.substr(0, c1));
  const double hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
  std::string cnt = s.substr(c2 + 1);
  bool log_spaced = false;
  if (cnt.size() >= 3 && cnt.substr(cnt.size() - 3) == "log") {
    log_spaced = true;
    cnt = cnt.substr(0, cnt.size() - 3);
  } else if (cnt.size() >= 3 && cnt.substr(cnt.size() - 3) == "lin") {
    cnt = cnt.substr(0, cnt.size() - 3);
  }
  return kappa_grid(lo, hi, std::stoi(cnt), log_spaced);
}

struct Flags {
  std::string method = "gm";
  std::string els;
  std::string restart_list;
  int restart_n = 0;
  int N = 0;
  double alpha = 0.0;
  std::string beta, gamma;
  double mu = 1.0, L = 1.0;
  std::string restrict_mode = "none";
  bool restrict_given = false;
  std::string methods;  // sweep
  std::string kappa;
  double tol_rho = 1e-4, eps_feas = 1e-7, rho_max = 1.5;
  std::string out;
  std::string cert_file, table_file;
  int trials = 100, dim = 20, iters = 200;
  unsigned long long seed = 0;
  double tol_alg = 1e-6, tol_dec = 1e-8;
  int n_max = 20;
  std::string function = "quadratic";
};

BisectOptions to_bisect(const Flags& fl) {
  BisectOptions opts;
  opts.tol_rho = fl.tol_rho;
  opts.rho_max = fl.rho_max;
  opts.mode = restriction_from_name(fl.restrict_mode);
  opts.solve.eps_feas = fl.eps_feas;
  return opts;
}

MethodSpec resolve_method(const Flags& fl, const FunctionClass& fc) {
  if (fl.method == "custom") {
    MethodSpec spec;
    spec.degree = fl.N;
    spec.alpha = fl.alpha;
    spec.beta = parse_list(fl.beta);
    spec.gamma = parse_list(fl.gamma);
    if (spec.beta.size() != fl.N + 1 || spec.gamma.size() != fl.N + 1)
      throw SpecError("beta and gamma must each list N+1 coefficients");
    return validate(spec);
  }
  return make_preset(preset_from_name(fl.method), fc);
}

// Writes to --out when given, stdout otherwise.
int emit(const Flags& fl, const std::string& text) {
  if (fl.out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream os(fl.out, std::ios::binary);
  if (!os) {
    std::cerr << "error: cannot open " << fl.out << "\n";
    return 1;
  }
  os << text;
  return 0;
}

int cmd_rate(const Flags& fl) {
  const FunctionClass fc{fl.mu, fl.L};
  if (!fc.valid()) throw SpecError("need 0 < mu <= L");
  const BisectOptions opts = to_bisect(fl);
  RateCertificate rc;
  if (!fl.els.empty()) {
    if (fl.restrict_given) throw SpecError("--restrict applies to fixed-step methods only");
    if (fl.els == "gd")
      rc = bisect_els_gd_rate(fc, opts);
    else if (fl.els == "hbm")
      rc = bisect_els_hbm_rate(fc, opts);
    else
      throw SpecError("unknown --els value: " + fl.els);
  } else if (fl.restart_n > 0) {
    if (fl.restrict_given) throw SpecError("--restrict applies to fixed-step methods only");
    rc = bisect_restart_rate(fc, fl.restart_n, opts);
  } else {
    rc = bisect_rate(resolve_method(fl, fc), fc, opts);
  }
  return emit(fl, serialize_certificate(rc.certificate));
}

double exp_restart_bound(double kappa) {
  return std::exp(-1.0 / (std::exp(1.0) * std::sqrt(8.0 * kappa)));
}

int cmd_sweep(const Flags& fl) {
  const std::vector<double> kappas = parse_kappa_grid(fl.kappa);
  const bool fig_effort = fl.restrict_given;  // iteration-count transform
  const BisectOptions opts = to_bisect(fl);

  std::vector<std::string> columns;
  std::vector<int> restart_ns;
  enum class Family { Methods, Els, Restart } family = Family::Methods;
  std::vector<std::string> method_names;
  if (!fl.els.empty()) {
    family = Family::Els;
    if (fl.els != "gd" && fl.els != "hbm") throw SpecError("unknown --els value");
    columns.push_back("els-" + fl.els);
  } else if (!fl.restart_list.empty()) {
    family = Family::Restart;
    restart_ns = parse_int_list(fl.restart_list);
    if (restart_ns.empty()) throw SpecError("empty --restart list");
    for (int n : restart_ns) columns.push_back("rho-n" + std::to_string(n));
    columns.push_back("rho-opt");
    columns.push_back("bound");
  } else {
    std::stringstream ss(fl.methods.empty() ? fl.method : fl.methods);
    std::string tok;
    while (std::getline(ss, tok, ',')) method_names.push_back(tok);
    columns = method_names;
  }
  if (family != Family::Methods && fig_effort)
    throw SpecError("--restrict applies to fixed-step methods only");

  auto transform = [&](double rho) {
    return fig_effort ? -1.0 / std::log(rho) : rho;
  };

  std::string text;
  if (fig_effort) text += "# transform: -1/log(rho)\n";
  text += "# kappa";
  for (const auto& c : columns) text += " " + c;
  text += "\n";

  for (double kappa : kappas) {
    const FunctionClass fc{1.0, kappa};
    std::vector<double> row{kappa};
    bool ok = true;
    std::string why;
    try {
      switch (family) {
        case Family::Methods:
          for (const auto& name : method_names) {
            const MethodSpec spec = make_preset(preset_from_name(name), fc);
            row.push_back(transform(bisect_rate(spec, fc, opts).rho_star));
          }
          break;
        case Family::Els:
          row.push_back(fl.els == "gd" ? bisect_els_gd_rate(fc, opts).rho_star
                                       : bisect_els_hbm_rate(fc, opts).rho_star);
          break;
        case Family::Restart: {
          int n_max = 0;
          for (int n : restart_ns) n_max = std::max(n_max, n);
          const RestartPlan plan = optimize_restart_period(fc, n_max, opts);
          for (int n : restart_ns) row.push_back(plan.per_n[n - 1].second.rho_star);
          row.push_back(plan.rho_star);
          row.push_back(exp_restart_bound(kappa));
          break;
        }
      }
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    for (double v : row) ok = ok && std::isfinite(v);
    if (!ok) {
      std::cerr << "warning: dropping kappa=" << fmt12(kappa)
                << (why.empty() ? "" : " (" + why + ")") << "\n";
      continue;
    }
    text += format_row(row) + "\n";
  }
  return emit(fl, text);
}

Trajectory trial_trajectory(const LyapunovCertificate& cert, const TestFunction& f,
                            int iters, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto rand_vec = [&](int d) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = gauss(rng);
    return v;
  };
  if (cert.kind == "els-gd") return simulate_els_gd(f, rand_vec(f.dim), iters);
  if (cert.kind == "els-hbm") return simulate_els_hbm(f, rand_vec(f.dim), iters);
  if (cert.kind == "restart") {
    const int cycles = std::max(2, iters / std::max(1, cert.n_inner));
    return simulate_restart(f, momentum_sequence(cert.n_inner), rand_vec(f.dim),
                            cycles);
  }
  std::vector<Eigen::VectorXd> x_init;
  for (int i = 0; i <= cert.spec.degree; ++i) x_init.push_back(rand_vec(f.dim));
  return simulate_method(cert.spec, f, x_init, iters);
}

int cmd_check(const Flags& fl) {
  if (!fl.table_file.empty()) {
    std::ifstream is(fl.table_file, std::ios::binary);
    if (!is) {
      std::cerr << "error: cannot open " << fl.table_file << "\n";
      return 1;
    }
    std::stringstream buf;
    buf << is.rdbuf();
    const std::string original = buf.str();
    std::string rebuilt;
    std::istringstream lines(original);
    std::string line;
    double prev_kappa = -1.0;
    while (std::getline(lines, line)) {
      if (!line.empty() && line[0] == '#') {
        rebuilt += line + "\n";
        continue;
      }
      if (line.empty()) continue;
      std::vector<double> vals;
      std::stringstream ls(line);
      double v;
      while (ls >> v) vals.push_back(v);
      for (double x : vals)
        if (!std::isfinite(x)) {
          std::cerr << "table check: non-finite value\n";
          return 2;
        }
      if (!vals.empty()) {
        if (vals[0] <= prev_kappa) {
          std::cerr << "table check: kappa not strictly increasing\n";
          return 2;
        }
        prev_kappa = vals[0];
      }
      rebuilt += format_row(vals) + "\n";
    }
    if (rebuilt != original) {
      std::cerr << "table check: round-trip mismatch\n";
      return 2;
    }
    std::cout << "table check: round-trip OK, kappa ascending, all finite\n";
    return 0;
  }

  std::ifstream is(fl.cert_file);
  if (!is) {
    std::cerr << "error: cannot open " << fl.cert_file << "\n";
    return 1;
  }
  std::stringstream buf;
  buf << is.rdbuf();
  const LyapunovCertificate cert = parse_certificate(buf.str());

  bool all_pass = true;
  std::string report;
  const ResidualReport alg = check_certificate_algebraic(cert, fl.tol_alg);
  for (const auto& c : alg.constraints) {
    report += "algebraic " + c.label + " slack=" + fmt12(c.slack) +
              (c.pass ? " PASS" : " FAIL") + "\n";
  }
  all_pass = all_pass && alg.pass;

  std::mt19937_64 rng(fl.seed);
  int quad_pass = 0;
  double worst_step = -1e300;
  for (int t = 0; t < fl.trials; ++t) {
    const TestFunction f = random_quadratic(cert.fc, fl.dim, rng);
    const DecreaseReport rep =
        check_decrease_on_trajectory(cert, trial_trajectory(cert, f, fl.iters, rng),
                                     fl.tol_dec);
    quad_pass += rep.pass;
    worst_step = std::max(worst_step, rep.worst_step);
  }
  if (fl.trials > 0) {
    report += "decrease quadratic " + std::to_string(quad_pass) + "/" +
              std::to_string(fl.trials) + " worst-step=" + fmt12(worst_step) + "\n";
    all_pass = all_pass && quad_pass == fl.trials;
  }
  const int lse_trials = fl.trials / 5;
  int lse_pass = 0;
  for (int t = 0; t < lse_trials; ++t) {
    const int d = std::min(fl.dim, 10);
    const TestFunction f = random_log_sum_exp(cert.fc, d, 3 * d, rng);
    lse_pass += check_decrease_on_trajectory(
                    cert, trial_trajectory(cert, f, fl.iters, rng), fl.tol_dec)
                    .pass;
  }
  if (lse_trials > 0) {
    report += "decrease log-sum-exp " + std::to_string(lse_pass) + "/" +
              std::to_string(lse_trials) + "\n";
    all_pass = all_pass && lse_pass == lse_trials;
  }
  report += all_pass ? "verdict PASS\n" : "verdict FAIL\n";
  std::cout << report;
  return all_pass ? 0 : 2;
}

int cmd_simulate(const Flags& fl) {
  const FunctionClass fc{fl.mu, fl.L};
  if (!fc.valid()) throw SpecError("need 0 < mu <= L");
  std::mt19937_64 rng(fl.seed);
  TestFunction f;
  if (fl.function == "quadratic")
    f = random_quadratic(fc, fl.dim, rng);
  else if (fl.function == "lse")
    f = random_log_sum_exp(fc, fl.dim, 3 * fl.dim, rng);
  else if (fl.function == "slater")
    f = slater_function(fc, fl.dim);
  else
    throw SpecError("unknown --function: " + fl.function);

  std::normal_distribution<double> gauss(0.0, 1.0);
  auto rand_vec = [&]() {
    Eigen::VectorXd v(fl.dim);
    for (int i = 0; i < fl.dim; ++i) v[i] = gauss(rng);
    return v;
  };

  Trajectory traj;
  if (!fl.els.empty()) {
    traj = fl.els == "gd" ? simulate_els_gd(f, rand_vec(), fl.iters)
                          : simulate_els_hbm(f, rand_vec(), fl.iters);
  } else if (fl.restart_n > 0) {
    traj = simulate_restart(f, momentum_sequence(fl.restart_n), rand_vec(),
                            std::max(1, fl.iters / fl.restart_n));
  } else {
    const MethodSpec spec = resolve_method(fl, fc);
    std::vector<Eigen::VectorXd> x_init;
    for (int i = 0; i <= spec.degree; ++i) x_init.push_back(rand_vec());
    traj = simulate_method(spec, f, x_init, fl.iters);
  }

  std::string text = "# k fgap xdist gnorm\n";
  for (int k = 0; k <= traj.horizon(); ++k)
    text += format_row({static_cast<double>(k), traj.f(k) - traj.f_star,
                        (traj.x(k) - traj.x_star).norm(), traj.g(k).norm()}) +
            "\n";
  return emit(fl, text);
}

int cmd_restart_opt(const Flags& fl) {
  const FunctionClass fc{fl.mu, fl.L};
  if (!fc.valid()) throw SpecError("need 0 < mu <= L");
  const RestartPlan plan = optimize_restart_period(fc, fl.n_max, to_bisect(fl));
  std::string text = "# N rho\n";
  for (const auto& [n, rc] : plan.per_n)
    text += format_row({static_cast<double>(n), rc.rho_star}) + "\n";
  text += "# optimal " + std::to_string(plan.n_star) + " " + fmt12(plan.rho_star) + "\n";
  text += "# bound " + fmt12(exp_restart_bound(fc.kappa())) + "\n";
  return emit(fl, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov rate certificates for first-order methods"};
  app.require_subcommand(1);
  Flags fl;

  auto add_class_flags = [&](CLI::App* cmd) {
    cmd->add_option("--mu", fl.mu, "strong convexity constant")->required();
    cmd->add_option("--L", fl.L, "smoothness constant")->required();
  };
  auto add_solver_flags = [&](CLI::App* cmd) {
    cmd->add_option("--tol-rho", fl.tol_rho, "bisection tolerance");
    cmd->add_option("--eps-feas", fl.eps_feas, "strict feasibility threshold");
    cmd->add_option("--rho-max", fl.rho_max, "upper end of the rate bracket");
  };
  auto add_method_flags = [&](CLI::App* cmd) {
    cmd->add_option("--method", fl.method, "gm|hbm|fgm|tmm|custom");
    cmd->add_option("--N", fl.N, "memory degree (custom)");
    cmd->add_option("--alpha", fl.alpha, "step size (custom)");
    cmd->add_option("--beta", fl.beta, "comma list, N+1 values (custom)");
    cmd->add_option("--gamma", fl.gamma, "comma list, N+1 values (custom)");
  };

  CLI::App* rate = app.add_subcommand("rate", "certify a rate, print the certificate");
  add_class_flags(rate);
  add_method_flags(rate);
  add_solver_flags(rate);
  rate->add_option("--els", fl.els, "exact line search variant: gd|hbm");
  rate->add_option("--restart", fl.restart_n, "restarted scheme with this period");
  CLI::Option* rate_restrict =
      rate->add_option("--restrict", fl.restrict_mode, "none|lambda-zero|posdef-shape");
  rate->add_option("--out", fl.out, "write to file instead of stdout");

  CLI::App* sweep = app.add_subcommand("sweep", "rate table over a kappa grid");
  sweep->add_option("--methods", fl.methods, "comma list of presets");
  sweep->add_option("--els", fl.els, "gd|hbm");
  sweep->add_option("--restart", fl.restart_list, "comma list of periods");
  sweep->add_option("--kappa", fl.kappa, "min:max:count[log|lin]")->required();
  CLI::Option* sweep_restrict =
      sweep->add_option("--restrict", fl.restrict_mode,
                        "restriction mode; emits -1/log(rho) effort units");
  add_solver_flags(sweep);
  sweep->add_option("--out", fl.out, "write to file instead of stdout");

  CLI::App* check = app.add_subcommand("check", "verify a certificate or table file");
  check->add_option("--cert", fl.cert_file, "certificate document");
  check->add_option("--table", fl.table_file, "sweep table round-trip check");
  check->add_option("--trials", fl.trials, "random quadratic trajectories");
  check->add_option("--dim", fl.dim, "trajectory dimension");
  check->add_option("--iters", fl.iters, "trajectory length");
  check->add_option("--seed", fl.seed, "rng seed");
  check->add_option("--tol-alg", fl.tol_alg, "algebraic residual tolerance");
  check->add_option("--tol-dec", fl.tol_dec, "decrease check tolerance");

  CLI::App* simulate = app.add_subcommand("simulate", "roll a method on a test function");
  add_class_flags(simulate);
  add_method_flags(simulate);
  simulate->add_option("--els", fl.els, "gd|hbm");
  simulate->add_option("--restart", fl.restart_n, "restart period");
  simulate->add_option("--function", fl.function, "quadratic|lse|slater");
  simulate->add_option("--dim", fl.dim, "dimension");
  simulate->add_option("--iters", fl.iters, "iterations");
  simulate->add_option("--seed", fl.seed, "rng seed");
  simulate->add_option("--out", fl.out, "write to file instead of stdout");

  CLI::App* ropt = app.add_subcommand("restart-opt", "optimize the restart period");
  add_class_flags(ropt);
  ropt->add_option("--n-max", fl.n_max, "largest period to scan");
  add_solver_flags(ropt);
  ropt->add_option("--out", fl.out, "write to file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  fl.restrict_given = rate_restrict->count() > 0 || sweep_restrict->count() > 0;

  try {
    if (app.got_subcommand(rate)) return cmd_rate(fl);
    if (app.got_subcommand(sweep)) return cmd_sweep(fl);
    if (app.got_subcommand(check)) return cmd_check(fl);
    if (app.got_subcommand(simulate)) return cmd_simulate(fl);
    if (app.got_subcommand(ropt)) return cmd_restart_opt(fl);
  } catch (const NoCertificateWithinBracket& e) {
    std::cerr << "no certificate: " << e.what() << "\n";
    return 2;
  } catch (const BackendUnknown& e) {
    std::cerr << "solver unknown: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
