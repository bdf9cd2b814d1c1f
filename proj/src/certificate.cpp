#include "lyap/certificate.hpp"

#include <cstdio>
#include <json.hpp>
#include <sstream>

namespace lyap {

LyapunovCertificate extract_certificate(const AssembledSdp& asdp,
                                        const Eigen::VectorXd& values) {
  const ProblemLayout& lay = asdp.layout;
  LyapunovCertificate cert;
  cert.P = Eigen::MatrixXd::Zero(lay.state_dim, lay.state_dim);
  int k = 0;
  for (int r = 0; r < lay.state_dim; ++r)
    for (int c = r; c < lay.state_dim; ++c, ++k) {
      cert.P(r, c) = values[lay.P_idx[k]];
      cert.P(c, r) = cert.P(r, c);
    }
  cert.p.resize(lay.p_dim);
  for (int r = 0; r < lay.p_dim; ++r) cert.p[r] = values[lay.p_idx[r]];
  for (const auto& [key, v] : lay.lambda_idx) cert.lambda.push_back({key, values[v]});
  for (const auto& [key, v] : lay.eta_idx) cert.eta.push_back({key, values[v]});
  for (int v : lay.nu_idx) cert.nu.push_back(values[v]);
  return cert;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s(buf);
  // bare integers still need to parse as JSON numbers; they do.
  if (s == "inf") return "1e308";
  if (s == "-inf") return "-1e308";
  return s;
}

PairKey parse_pair_key(const std::string& key, const std::string& prefix) {
  // prefix[i][j], i/j decimal or "star"
  const std::string body = key.substr(prefix.size());
  const auto close1 = body.find(']');
  const std::string a = body.substr(1, close1 - 1);
  const std::string b = body.substr(close1 + 2, body.size() - close1 - 3);
  auto tok = [](const std::string& s) {
    return s == "star" ? BasisWorkspace::kStarIndex : std::stoi(s);
  };
  return {tok(a), tok(b)};
}

}  // namespace

std::string serialize_certificate(const LyapunovCertificate& cert) {
  std::ostringstream os;
  os << "{\n";
  auto emit = [&os](const std::string& key, const std::string& value, bool quote) {
    os << "  \"" << key << "\": " << (quote ? "\"" + value + "\"" : value) << ",\n";
  };
  emit("kind", cert.kind, true);
  emit("rho", fmt(cert.rho), false);
  emit("mu", fmt(cert.fc.mu), false);
  emit("L", fmt(cert.fc.L), false);
  emit("restrict", restriction_name(cert.mode), true);
  emit("scale", "L-normalized", true);
  if (cert.kind == "method") {
    emit("N", std::to_string(cert.spec.degree), false);
    emit("alpha", fmt(cert.spec.alpha), false);
    for (int j = 0; j <= cert.spec.degree; ++j)
      emit("beta[" + std::to_string(j) + "]", fmt(cert.spec.beta[j]), false);
    for (int j = 0; j <= cert.spec.degree; ++j)
      emit("gamma[" + std::to_string(j) + "]", fmt(cert.spec.gamma[j]), false);
  }
  if (cert.kind == "restart") emit("n_inner", std::to_string(cert.n_inner), false);
  emit("state_dim", std::to_string(cert.P.rows()), false);
  emit("p_dim", std::to_string(cert.p.size()), false);
  for (int r = 0; r < cert.P.rows(); ++r)
    for (int c = r; c < cert.P.cols(); ++c)
      emit("P[" + std::to_string(r) + "][" + std::to_string(c) + "]", fmt(cert.P(r, c)),
           false);
  for (int r = 0; r < cert.p.size(); ++r)
    emit("p[" + std::to_string(r) + "]", fmt(cert.p[r]), false);
  for (const auto& [key, v] : cert.lambda)
    emit("lambda[" + pair_token(key.i) + "][" + pair_token(key.j) + "]", fmt(v), false);
  for (const auto& [key, v] : cert.eta)
    emit("eta[" + pair_token(key.i) + "][" + pair_token(key.j) + "]", fmt(v), false);
  for (size_t i = 0; i < cert.nu.size(); ++i)
    emit("nu[" + std::to_string(i) + "]", fmt(cert.nu[i]), false);
  emit("margin", fmt(cert.margin), false);
  emit("eps_feas", fmt(cert.eps_feas), false);
  emit("solver.backend", "dense-barrier", true);
  emit("solver.newton_steps", std::to_string(cert.newton_steps), false);
  os << "  \"solver.gap\": " << fmt(cert.solver_gap) << "\n}\n";
  return os.str();
}

namespace {

LyapunovCertificate parse_fields(const nlohmann::json& doc) {
  LyapunovCertificate cert;
  cert.kind = doc.at("kind").get<std::string>();
  if (cert.kind != "method" && cert.kind != "els-gd" && cert.kind != "els-hbm" &&
      cert.kind != "restart")
    throw SpecError("certificate: unknown kind " + cert.kind);
  cert.rho = doc.at("rho").get<double>();
  cert.fc.mu = doc.at("mu").get<double>();
  cert.fc.L = doc.at("L").get<double>();
  cert.mode = restriction_from_name(doc.at("restrict").get<std::string>());
  if (cert.kind == "method") {
    cert.spec.degree = doc.at("N").get<int>();
    cert.spec.alpha = doc.at("alpha").get<double>();
    cert.spec.beta.resize(cert.spec.degree + 1);
    cert.spec.gamma.resize(cert.spec.degree + 1);
    for (int j = 0; j <= cert.spec.degree; ++j) {
      cert.spec.beta[j] = doc.at("beta[" + std::to_string(j) + "]").get<double>();
      cert.spec.gamma[j] = doc.at("gamma[" + std::to_string(j) + "]").get<double>();
    }
  }
  if (doc.contains("n_inner")) cert.n_inner = doc.at("n_inner").get<int>();
  const int sd = doc.at("state_dim").get<int>();
  const int pd = doc.at("p_dim").get<int>();
  cert.P = Eigen::MatrixXd::Zero(sd, sd);
  for (int r = 0; r < sd; ++r)
    for (int c = r; c < sd; ++c) {
      cert.P(r, c) =
          doc.at("P[" + std::to_string(r) + "][" + std::to_string(c) + "]").get<double>();
      cert.P(c, r) = cert.P(r, c);
    }
  cert.p.resize(pd);
  for (int r = 0; r < pd; ++r) cert.p[r] = doc.at("p[" + std::to_string(r) + "]").get<double>();
  for (const auto& [key, value] : doc.items()) {
    if (key.rfind("lambda[", 0) == 0)
      cert.lambda.push_back({parse_pair_key(key, "lambda"), value.get<double>()});
    else if (key.rfind("eta[", 0) == 0)
      cert.eta.push_back({parse_pair_key(key, "eta"), value.get<double>()});
  }
  for (int i = 0; doc.contains("nu[" + std::to_string(i) + "]"); ++i)
    cert.nu.push_back(doc.at("nu[" + std::to_string(i) + "]").get<double>());
  cert.margin = doc.at("margin").get<double>();
  cert.eps_feas = doc.at("eps_feas").get<double>();
  if (doc.contains("solver.newton_steps"))
    cert.newton_steps = doc.at("solver.newton_steps").get<int>();
  if (doc.contains("solver.gap")) cert.solver_gap = doc.at("solver.gap").get<double>();
  return cert;
}

}  // namespace

LyapunovCertificate parse_certificate(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw SpecError("certificate: not a JSON object");
  try {
    return parse_fields(doc);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("certificate: ") + e.what());
  }
}

}  // namespace lyap
