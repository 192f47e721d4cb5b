// Model parameters shared by every construction: spin, chain length, the
// rational anisotropy eta = r'/(2 l r), and the modulus. The cyclic
// construction carries three extra knobs (r'', v, lambda0).
#pragma once

#include <complex>
#include <string>
#include <vector>

#include "vertexq/theta.hpp"

#include <json.hpp>

namespace vertexq {

enum class Method { baxter, fabricius, both };

struct ModelParams {
  Method method = Method::baxter;
  double l = 1.0;  // spin; 2l is a positive integer
  int N = 2;       // number of sites
  int r = 4;       // anisotropy denominator (grid size of the gauge family)
  int r_prime = 1; // anisotropy numerator, coprime to r
  cplx tau{0.0, 1.0};
  // cyclic construction only
  int r_second = 0;  // lambda0 - v = 2 r'' l eta
  cplx v{0.0, 0.0};
  cplx lambda0{0.0, 0.0};

  double eta() const { return r_prime / (2.0 * l * r); }
  int dim() const;   // 2l+1
  int hdim() const;  // (2l+1)^N
};

struct RunConfig {
  ModelParams model;
  ThetaParams theta;  // tau mirrors model.tau
  int quad_n = 32;
  unsigned long long seed = 20260822;
  std::vector<std::string> checks;  // empty = every check applicable to the method
  std::string out_dir;
};

// Names every violated constraint; empty result means the parameters are
// usable. Messages are stable "<field>: <explanation>" strings.
std::vector<std::string> validate(const ModelParams& m);

Method method_from_string(const std::string& s);
std::string method_to_string(Method m);

// Complex values are encoded as [re, im]. Unknown fields are rejected so a
// typo cannot silently fall back to a default.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const RunConfig& c);

}  // namespace vertexq
