#include "vertexq/params.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace vertexq {

namespace {

bool near_int(double x, double tol = 1e-12) { return std::abs(x - std::lround(x)) < tol; }

int spin2(const ModelParams& m) { return static_cast<int>(std::lround(2.0 * m.l)); }

}  // namespace

int ModelParams::dim() const { return spin2(*this) + 1; }

int ModelParams::hdim() const {
  int d = 1;
  for (int i = 0; i < N; ++i) d *= dim();
  return d;
}

std::vector<std::string> validate(const ModelParams& m) {
  std::vector<std::string> bad;
  const bool spin_ok = near_int(2.0 * m.l) && std::lround(2.0 * m.l) >= 1;
  if (!spin_ok) bad.emplace_back("l: 2l must be a positive integer");
  if (m.N < 1) bad.emplace_back("N: chain length must be at least 1");
  if (spin_ok && m.N >= 1 && !near_int(m.N * m.l))
    bad.emplace_back("N: N*l must be an integer");
  if (m.r < 2) bad.emplace_back("r: must be at least 2");
  if (m.r_prime == 0) bad.emplace_back("r_prime: must be nonzero");
  if (m.r >= 2 && m.r_prime != 0 && std::gcd(m.r, std::abs(m.r_prime)) != 1)
    bad.emplace_back("r_prime: r and r' must be coprime");
  if (spin_ok && m.r >= 1 && m.r_prime != 0) {
    const double bound = 1.0 / (2.0 * (2.0 * m.l + 1.0));
    if (std::abs(m.eta()) > bound + 1e-15)
      bad.emplace_back("eta: |r'/(2 l r)| exceeds 1/(2(2l+1))");
  }
  if (!(m.tau.imag() > 0.0) || m.tau.real() != 0.0)
    bad.emplace_back("tau: must be purely imaginary with Im tau > 0");

  if (m.method == Method::fabricius || m.method == Method::both) {
    if (m.N % 2 != 0) bad.emplace_back("N: the cyclic construction requires even N");
    if (spin_ok && m.r >= 1 && m.r_prime != 0) {
      const cplx want = 2.0 * m.r_second * m.l * m.eta();
      if (std::abs(m.lambda0 - m.v - want) > 1e-12)
        bad.emplace_back("lambda0: lambda0 - v must equal 2 r'' l eta");
    }
  }
  return bad;
}

Method method_from_string(const std::string& s) {
  if (s == "baxter") return Method::baxter;
  if (s == "fabricius") return Method::fabricius;
  if (s == "both") return Method::both;
  throw std::invalid_argument("method: unknown value '" + s + "' (baxter|fabricius|both)");
}

std::string method_to_string(Method m) {
  switch (m) {
    case Method::baxter: return "baxter";
    case Method::fabricius: return "fabricius";
    case Method::both: return "both";
  }
  return "baxter";
}

namespace {

cplx get_cplx(const nlohmann::json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw std::invalid_argument("config: " + key + " must be a [re, im] pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "method", "l", "N", "r", "r_prime", "tau", "r_second", "v", "lambda0",
      "eta", "n_max", "tol", "quad_n", "seed", "checks", "out_dir"};
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw std::invalid_argument("config: unknown field '" + key + "'");

  RunConfig c;
  try {
    c.model.method = method_from_string(j.at("method").get<std::string>());
    c.model.l = j.at("l").get<double>();
    c.model.N = j.at("N").get<int>();
    c.model.r = j.at("r").get<int>();
    c.model.r_prime = j.at("r_prime").get<int>();
    c.model.tau = j.contains("tau") ? get_cplx(j, "tau") : cplx(0.0, 1.0);
    if (j.contains("r_second")) c.model.r_second = j.at("r_second").get<int>();
    if (j.contains("v")) c.model.v = get_cplx(j, "v");
    if (j.contains("lambda0")) c.model.lambda0 = get_cplx(j, "lambda0");
    if (j.contains("n_max")) c.theta.n_max = j.at("n_max").get<int>();
    if (j.contains("tol")) c.theta.tol = j.at("tol").get<double>();
    if (j.contains("quad_n")) c.quad_n = j.at("quad_n").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<unsigned long long>();
    if (j.contains("checks")) c.checks = j.at("checks").get<std::vector<std::string>>();
    if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.theta.tau = c.model.tau;

  // a redundant eta field must agree with the one derived from r, r', l
  if (j.contains("eta")) {
    const double eta = j.at("eta").get<double>();
    if (std::abs(eta - c.model.eta()) > 1e-14)
      throw std::invalid_argument("config: eta contradicts r'/(2 l r)");
  }
  if (c.quad_n < 4 || c.quad_n > 4096)
    throw std::invalid_argument("config: quad_n out of range [4, 4096]");
  if (c.theta.n_max < 8 || c.theta.n_max > 4096)
    throw std::invalid_argument("config: n_max out of range [8, 4096]");
  return c;
}

nlohmann::ordered_json config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["method"] = method_to_string(c.model.method);
  j["l"] = c.model.l;
  j["N"] = c.model.N;
  j["r"] = c.model.r;
  j["r_prime"] = c.model.r_prime;
  j["tau"] = {c.model.tau.real(), c.model.tau.imag()};
  if (c.model.method != Method::baxter) {
    j["r_second"] = c.model.r_second;
    j["v"] = {c.model.v.real(), c.model.v.imag()};
    j["lambda0"] = {c.model.lambda0.real(), c.model.lambda0.imag()};
  }
  j["n_max"] = c.theta.n_max;
  j["tol"] = c.theta.tol;
  j["quad_n"] = c.quad_n;
  j["seed"] = c.seed;
  if (!c.checks.empty()) j["checks"] = c.checks;
  return j;
}

}  // namespace vertexq
