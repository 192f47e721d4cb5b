#include "vertexq/theta.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace vertexq {

namespace {
constexpr double kPi = std::numbers::pi;

void check_char(int a, int b) {
  if ((a != 0 && a != 1) || (b != 0 && b != 1))
    throw std::invalid_argument("theta: characteristics must be 0 or 1, got a=" +
                                std::to_string(a) + " b=" + std::to_string(b));
}
}  // namespace

ThetaEngine::ThetaEngine(const ThetaParams& p)
    : par_(p), tables_(kernels::make_tables(p.tau, p.n_max)) {
  if (!(p.tol > 0.0)) throw std::domain_error("theta: tolerance must be positive");
}

cplx ThetaEngine::theta(int a, int b, cplx z) const {
  check_char(a, b);
  if (std::abs(z.imag()) > 4.0 * par_.tau.imag())
    throw std::domain_error("theta: |Im z| = " + std::to_string(std::abs(z.imag())) +
                            " exceeds 4 Im tau = " + std::to_string(4.0 * par_.tau.imag()));
  const cplx w = z + 0.5 * b;
  cplx out;
  double tail;
  kernels::active()(tables_, a, &w, 1, &out, &tail);
  if (tail > par_.tol * std::max(1.0, std::abs(out)))
    throw std::runtime_error("theta: truncation at n_max=" + std::to_string(par_.n_max) +
                             " insufficient for Im z = " + std::to_string(z.imag()));
  return out;
}

void ThetaEngine::theta(int a, int b, std::span<const cplx> z, std::span<cplx> out) const {
  check_char(a, b);
  if (z.size() != out.size()) throw std::invalid_argument("theta: output span size mismatch");
  const double strip = 4.0 * par_.tau.imag();
  for (const cplx& p : z)
    if (std::abs(p.imag()) > strip)
      throw std::domain_error("theta: |Im z| = " + std::to_string(std::abs(p.imag())) +
                              " exceeds 4 Im tau = " + std::to_string(strip));

  std::vector<cplx> w(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) w[i] = z[i] + 0.5 * b;
  std::vector<double> tail(z.size());
  kernels::active()(tables_, a, w.data(), w.size(), out.data(), tail.data());

  for (std::size_t i = 0; i < z.size(); ++i)
    if (tail[i] > par_.tol * std::max(1.0, std::abs(out[i])))
      throw std::runtime_error("theta: truncation at n_max=" + std::to_string(par_.n_max) +
                               " insufficient for Im z = " + std::to_string(z[i].imag()));
}

cplx ThetaEngine::bracket(cplx z) const { return theta(1, 1, z); }

cplx ThetaEngine::bracket_run(cplx z, int k, double eta) const {
  if (k < 0) throw std::invalid_argument("bracket_run: negative length");
  if (k == 0) return 1.0;
  std::vector<cplx> args(k), vals(k);
  for (int j = 0; j < k; ++j) args[j] = z + 2.0 * j * eta;
  theta(1, 1, args, vals);
  cplx prod = 1.0;
  for (const cplx& v : vals) prod *= v;
  return prod;
}

cplx ThetaEngine::bracket_sym(cplx z, cplx a, int k, double eta) const {
  return bracket_run(z + a, k, eta) * bracket_run(-z + a, k, eta);
}

cplx ThetaEngine::theta_pow2l(double l, double eta, cplx u) const {
  const int k2l = static_cast<int>(std::lround(2.0 * l));
  if (k2l < 1 || std::abs(2.0 * l - k2l) > 1e-12)
    throw std::invalid_argument("theta_pow2l: 2l must be a positive integer");
  std::vector<cplx> args(k2l), vals(k2l);
  for (int j = 0; j < k2l; ++j) args[j] = u + (2.0 * j - k2l + 1.0) * eta;
  theta(0, 0, args, vals);
  cplx prod = 1.0;
  for (const cplx& v : vals) prod *= v;
  return prod;
}

cplx ThetaEngine::pairing_const(int n, double eta) const {
  if (n < 1) throw std::invalid_argument("pairing_const: n must be positive");
  const cplx ipi(0.0, kPi);
  cplx prod = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const cplx f = 1.0 - std::exp(2.0 * ipi * static_cast<double>(j) * par_.tau);
    prod *= f;
    if (std::abs(std::abs(f) - 1.0) < 1e-16) break;  // factors are 1 from here on
  }
  const cplx den = bracket(2.0 * (n + 1) * eta) * prod * prod * prod;
  if (std::abs(den) < 1e-13)
    throw std::domain_error("pairing_const: degenerate denominator at n=" + std::to_string(n));
  return -2.0 * eta * std::exp(0.75 * ipi * par_.tau) / den;
}

cplx ThetaEngine::cap_F(double l, double eta, cplx z) const {
  const int k2l = static_cast<int>(std::lround(2.0 * l));
  return pairing_const(k2l, eta) * std::exp(cplx(0.0, -kPi) * par_.tau) *
         theta_pow2l(l, eta, z);
}

cplx ThetaEngine::cap_G(double l, double eta, cplx z) const { return theta_pow2l(l, eta, z); }

cplx ThetaEngine::coeff_WL(int a, cplx u, double eta) const {
  // numerator/denominator characteristics per weight index
  static constexpr int kChar[4][2] = {{1, 1}, {1, 0}, {0, 0}, {0, 1}};
  if (a < 0 || a > 3) throw std::invalid_argument("coeff_WL: index out of range");
  const cplx den = theta(kChar[a][0], kChar[a][1], cplx(eta, 0.0));
  if (std::abs(den) < 1e-13)
    throw std::domain_error("coeff_WL: theta denominator vanishes at eta=" + std::to_string(eta));
  return theta(kChar[a][0], kChar[a][1], u) / den;
}

cplx ThetaEngine::coeff_WR(int a, cplx u, double eta) const {
  return coeff_WL(a, u + eta, eta);
}

}  // namespace vertexq
