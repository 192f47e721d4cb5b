#include "vertexq/lattice.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <stdexcept>
#include <string>

namespace vertexq {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kFormAgreement = 1e-9;
// generous for a desk-scale chain; (2l+1)^N above this is refused
constexpr double kMaxDim = 65536.0;
}  // namespace

const Eigen::Matrix2cd& pauli(int a) {
  static const std::array<Eigen::Matrix2cd, 4> s = [] {
    std::array<Eigen::Matrix2cd, 4> m;
    const cplx i(0.0, 1.0);
    m[0] << 1, 0, 0, 1;
    m[1] << 0, 1, 1, 0;
    m[2] << 0, -i, i, 0;
    m[3] << 1, 0, 0, -1;
    return m;
  }();
  if (a < 0 || a > 3) throw std::invalid_argument("pauli: index must be 0..3");
  return s[static_cast<std::size_t>(a)];
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

Eigen::MatrixXcd tensor_power(const Eigen::MatrixXcd& a, int n) {
  if (n < 1) throw std::invalid_argument("tensor_power: n must be positive");
  Eigen::MatrixXcd out = a;
  for (int k = 1; k < n; ++k) out = kron(out, a);
  return out;
}

TwoSiteR r_matrix(const ThetaEngine& eng, cplx u, const ModelParams& mp) {
  const double eta = mp.eta();
  TwoSiteR out;
  out.sum_form.setZero();
  for (int a = 0; a < 4; ++a) {
    const Eigen::Matrix4cd ss = Eigen::kroneckerProduct(pauli(a), pauli(a));
    out.sum_form += eng.coeff_WR(a, u, eta) * ss;
  }

  // same matrix at the transformed modulus 2it, t = i/tau
  const cplx I(0.0, 1.0);
  const cplx t = I / eng.params().tau;
  ThetaEngine aux{ThetaParams{2.0 * I * t, eng.params().n_max, eng.params().tol}};
  const cplx th01_2eta = aux.theta(0, 1, 2.0 * I * t * eta);
  const cplx th11_2eta = aux.theta(1, 1, 2.0 * I * t * eta);
  const cplx th01_u = aux.theta(0, 1, I * t * u);
  const cplx th11_u = aux.theta(1, 1, I * t * u);
  const cplx th01_u2 = aux.theta(0, 1, I * t * (u + 2.0 * eta));
  const cplx th11_u2 = aux.theta(1, 1, I * t * (u + 2.0 * eta));
  const cplx den = aux.theta(0, 1, 0.0) * th01_2eta * th11_2eta;
  if (std::abs(den) < 1e-13)
    throw std::domain_error("r_matrix: normalization denominator vanishes");
  const cplx C = 2.0 * std::exp(-kPi * t * u * (u + 2.0 * eta)) / den;
  const cplx a_ = C * th01_2eta * th01_u * th11_u2;
  const cplx b_ = C * th01_2eta * th11_u * th01_u2;
  const cplx c_ = C * th11_2eta * th01_u * th01_u2;
  const cplx d_ = C * th11_2eta * th11_u * th11_u2;
  out.explicit_form << a_, 0, 0, d_, 0, b_, c_, 0, 0, c_, b_, 0, d_, 0, 0, a_;

  out.agreement = (out.sum_form - out.explicit_form).norm() / out.sum_form.norm();
  if (out.agreement > kFormAgreement)
    throw std::runtime_error("r_matrix: forms disagree by " + std::to_string(out.agreement));
  return out;
}

std::array<std::array<SiteMap, 2>, 2> l_blocks(const ThetaEngine& eng, const RepBasis& basis,
                                               cplx u) {
  std::array<std::array<SiteMap, 2>, 2> blk;
  for (auto& row : blk)
    for (auto& b : row) b = SiteMap::Zero(basis.dim, basis.dim);
  for (int a = 0; a < 4; ++a) {
    const SiteMap m = eng.coeff_WL(a, u, basis.eta) * sklyanin_generator(basis, a);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) blk[i][j] += pauli(a)(i, j) * m;
  }
  return blk;
}

Eigen::MatrixXcd l_operator(const ThetaEngine& eng, const RepBasis& basis, cplx u) {
  const auto blk = l_blocks(eng, basis, u);
  const int d = basis.dim;
  Eigen::MatrixXcd L(2 * d, 2 * d);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) L.block(i * d, j * d, d, d) = blk[i][j];
  return L;
}

BigOp transfer_matrix(const ThetaEngine& eng, const RepBasis& basis, cplx u,
                      const ModelParams& mp) {
  const int d = basis.dim;
  const double need = std::pow(static_cast<double>(d), mp.N);
  if (need > kMaxDim)
    throw std::length_error("transfer_matrix: chain needs dimension " +
                            std::to_string(static_cast<long long>(need)) + ", budget is " +
                            std::to_string(static_cast<long long>(kMaxDim)));
  const auto blk = l_blocks(eng, basis, u);
  std::array<std::array<Eigen::MatrixXcd, 2>, 2> acc = blk;  // site N
  for (int site = 1; site < mp.N; ++site) {
    std::array<std::array<Eigen::MatrixXcd, 2>, 2> nxt;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        nxt[i][j] = kron(acc[i][0], blk[0][j]) + kron(acc[i][1], blk[1][j]);
    acc = std::move(nxt);
  }
  return BigOp{acc[0][0] + acc[1][1], &mp};
}

cplx h_plus(const ThetaEngine& eng, cplx u, const ModelParams& mp) {
  const cplx base = 2.0 * eng.bracket(u - 2.0 * mp.l * mp.eta());
  return std::pow(base, mp.N);
}

cplx h_minus(const ThetaEngine& eng, cplx u, const ModelParams& mp) {
  const cplx base = 2.0 * eng.bracket(u + 2.0 * mp.l * mp.eta());
  return std::pow(base, mp.N);
}

}  // namespace vertexq
