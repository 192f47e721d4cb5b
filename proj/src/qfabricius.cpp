#include "vertexq/qfabricius.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>

namespace vertexq {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kQuasiTol = 1e-7;
constexpr double kMaxDim = 65536.0;
constexpr double kTiny = 1e-300;
constexpr double kCompatTol = 1e-9;
constexpr double kClosureTol = 1e-8;

ThetaEngine half_modulus_engine(const ThetaEngine& eng) {
  ThetaParams p = eng.params();
  p.tau = p.tau / 2.0;
  return ThetaEngine(p);
}

int md(int a, int m) { return ((a % m) + m) % m; }

int wrap_index(int k, int m) { return md(k - 1, m) + 1; }

double elapsed(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

GaugeM gauge_m(const ThetaEngine& eng, cplx lambda, cplx v) {
  const ThetaEngine half = half_modulus_engine(eng);
  GaugeM g;
  g.lambda = lambda;
  g.v = v;
  const cplx zm = (lambda - v) / 2.0;
  const cplx zp = (lambda + v) / 2.0;
  g.matrix(0, 0) = -half.theta(0, 0, zm);
  g.matrix(0, 1) = -half.theta(0, 0, zp);
  g.matrix(1, 0) = half.theta(0, 1, zm);
  g.matrix(1, 1) = half.theta(0, 1, zp);
  return g;
}

ThetaVector omega_vector(const RepBasis& basis, cplx lambda, cplx u, cplx v) {
  const double l = basis.l;
  return basis.bracket_vector((lambda + u - v) / 2.0 + (1.0 - l) * basis.eta);
}

cplx fab_lambda(const ModelParams& mp, int k) {
  return mp.lambda0 + 4.0 * k * mp.l * mp.eta();
}

bool fab_transition_allowed(int two_r, int i2, int j2) {
  if (i2 < 1 || i2 > two_r || j2 < 1 || j2 > two_r) return false;
  return md(i2 - j2 - 1, two_r) == 0 || md(i2 - j2 + 1, two_r) == 0;
}

int fab_branch(int two_r, int i2, int j2) {
  if (two_r < 3) throw std::invalid_argument("fab_branch: grid too small to orient moves");
  if (!fab_transition_allowed(two_r, i2, j2))
    throw std::invalid_argument("fab_branch: transition not allowed");
  return md(i2 - j2 - 1, two_r) == 0 ? 1 : -1;
}

std::vector<std::pair<int, int>> fab_transitions(int two_r) {
  std::vector<std::pair<int, int>> t;
  for (int j2 = 1; j2 <= two_r; ++j2)
    for (int i2 = 1; i2 <= two_r; ++i2)
      if (fab_transition_allowed(two_r, i2, j2)) t.emplace_back(i2, j2);
  return t;
}

TwistedGaugeL twisted_gauge_l(const RepBasis& basis, cplx u, cplx v, cplx lambda_row,
                              cplx lambda_col) {
  const ThetaEngine& eng = *basis.eng;
  const Eigen::Matrix2cd Mr = gauge_m(eng, lambda_row, v).matrix;
  const Eigen::Matrix2cd Mc = gauge_m(eng, lambda_col, v).matrix;
  const cplx det = Mr(0, 0) * Mr(1, 1) - Mr(0, 1) * Mr(1, 0);
  if (std::abs(det) < 1e-12)
    throw std::domain_error("twisted_gauge_l: row gauge matrix is singular");
  Eigen::Matrix2cd Mri;
  Mri << Mr(1, 1) / det, -Mr(0, 1) / det, -Mr(1, 0) / det, Mr(0, 0) / det;
  const auto blk = l_blocks(eng, basis, u);
  const int d = basis.dim;
  std::array<std::array<SiteMap, 2>, 2> t;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      t[a][b] = SiteMap::Zero(d, d);
      for (int c = 0; c < 2; ++c)
        for (int e = 0; e < 2; ++e) t[a][b] += Mri(a, c) * blk[c][e] * Mc(e, b);
    }
  return {t[0][0], t[0][1], t[1][0], t[1][1]};
}

FabS build_S_fab(const RepBasis& basis, const ModelParams& mp, cplx u,
                 const Eigen::MatrixXcd& tau_consts) {
  const int two_r = 2 * mp.r, d = basis.dim;
  if (tau_consts.rows() != d || tau_consts.cols() != two_r)
    throw std::invalid_argument("build_S_fab: tau_consts must be dim x 2r");
  FabS S;
  S.two_r = two_r;
  S.tau_consts = tau_consts;
  S.grid.assign(two_r, std::vector<SiteMap>(two_r, SiteMap::Zero(d, d)));
  std::map<std::pair<int, int>, Eigen::VectorXcd> cache;  // (j2, sign) -> coeffs
  for (const auto& [i2, j2] : fab_transitions(two_r)) {
    const int sign = fab_branch(two_r, i2, j2);
    auto it = cache.find({j2, sign});
    if (it == cache.end()) {
      const double s = sign;
      const Eigen::VectorXcd c =
          basis.to_coeffs(omega_vector(basis, s * fab_lambda(mp, j2), u, s * mp.v));
      it = cache.emplace(std::make_pair(j2, sign), c).first;
    }
    S.grid[i2 - 1][j2 - 1] = it->second * tau_consts.col(j2 - 1).transpose();
  }
  return S;
}

BigOp qr_fab(const RepBasis& basis, const ModelParams& mp, cplx u,
             const Eigen::MatrixXcd& tau_consts) {
  if (mp.N % 2 != 0)
    throw std::invalid_argument(
        "qr_fab: chain length must be even; the trace of an odd product over the cyclic "
        "grid vanishes identically");
  const int two_r = 2 * mp.r, d = basis.dim;
  const double need = std::pow(static_cast<double>(d), mp.N);
  if (need > kMaxDim)
    throw std::length_error("qr_fab: chain needs dimension " + std::to_string(need) +
                            ", budget is " + std::to_string(kMaxDim));
  const FabS S = build_S_fab(basis, mp, u, tau_consts);
  std::vector<std::vector<Eigen::MatrixXcd>> acc(two_r, std::vector<Eigen::MatrixXcd>(two_r));
  for (int i = 0; i < two_r; ++i)
    for (int j = 0; j < two_r; ++j) acc[i][j] = S.grid[i][j];
  const int hd = static_cast<int>(std::lround(need));
  for (int step = 1; step < mp.N; ++step) {
    const int cur = acc[0][0].rows();
    std::vector<std::vector<Eigen::MatrixXcd>> nxt(
        two_r,
        std::vector<Eigen::MatrixXcd>(two_r, Eigen::MatrixXcd::Zero(cur * d, cur * d)));
    for (int i = 0; i < two_r; ++i)
      for (int j = 0; j < two_r; ++j)
        for (int k = 0; k < two_r; ++k) {
          if (!fab_transition_allowed(two_r, k + 1, j + 1)) continue;
          nxt[i][j] += kron(acc[i][k], S.grid[k][j]);
        }
    acc.swap(nxt);
  }
  BigOp q;
  q.matrix = Eigen::MatrixXcd::Zero(hd, hd);
  for (int i = 0; i < two_r; ++i) q.matrix += acc[i][i];
  q.params = &mp;
  return q;
}

FabUMu u_mu_tables(int two_r, int j3, int i3, int j2, int i2) {
  FabUMu t;
  t.sigma = fab_branch(two_r, j3, j2);
  t.sigma_p = fab_branch(two_r, i3, i2);
  t.mu1 = t.sigma_p - t.sigma;
  t.mu2 = t.sigma_p + t.sigma;
  return t;
}

Eigen::MatrixXcd w_matrix_fab(const RepBasis& basis, const ModelParams& mp,
                              const Eigen::MatrixXcd& tau_consts, int j, int i, cplx u,
                              cplx up) {
  const int two_r = 2 * mp.r, d = basis.dim;
  if (j < 1 || j > d || i < 1 || i > d)
    throw std::invalid_argument("w_matrix_fab: site index out of range");
  if (tau_consts.rows() != d || tau_consts.cols() != two_r)
    throw std::invalid_argument("w_matrix_fab: tau_consts must be dim x 2r");
  const ThetaEngine& eng = *basis.eng;
  const double l = mp.l, eta = mp.eta();
  const cplx off = mp.lambda0 - mp.v;
  const cplx im_part(0.0, off.imag());
  const double re_part = off.real();
  Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(two_r * two_r, two_r * two_r);
  for (int j2 = 1; j2 <= two_r; ++j2)
    for (int j3 = 1; j3 <= two_r; ++j3) {
      if (!fab_transition_allowed(two_r, j3, j2)) continue;
      for (int i2 = 1; i2 <= two_r; ++i2)
        for (int i3 = 1; i3 <= two_r; ++i3) {
          if (!fab_transition_allowed(two_r, i3, i2)) continue;
          const FabUMu t = u_mu_tables(two_r, j3, i3, j2, i2);
          const double sg = t.sigma, sp = t.sigma_p;
          const cplx fa = im_part + 2.0 * (i2 - j2) * l * eta + (sp * up + sg * u) / 2.0 +
                          static_cast<double>(t.mu1) * l * eta;
          const cplx ga = re_part + 2.0 * (i2 + j2) * l * eta + (sp * up - sg * u) / 2.0 +
                          static_cast<double>(t.mu2) * l * eta;
          const cplx val = std::conj(tau_consts(j - 1, j2 - 1)) * tau_consts(i - 1, i2 - 1) *
                           eng.cap_F(l, eta, fa) * eng.cap_G(l, eta, ga);
          W((j3 - 1) * two_r + (i3 - 1), (j2 - 1) * two_r + (i2 - 1)) = val;
        }
    }
  return W;
}

cplx fab_ratio_A(const ThetaEngine& eng, const ModelParams& mp, cplx u, cplx up, int i2,
                 int j2) {
  const double l = mp.l, eta = mp.eta();
  const cplx base = mp.lambda0.real() - mp.v.real() + 2.0 * (i2 + j2) * l * eta + 2.0 * l * eta;
  const cplx num = eng.cap_G(l, eta, base + (up - u) / 2.0);
  const cplx den = eng.cap_G(l, eta, base + (u - up) / 2.0);
  if (std::abs(den) < 1e-13)
    throw std::domain_error("fab_ratio_A: denominator vanishes at this spectral pair");
  return num / den;
}

cplx fab_ratio_B(const ThetaEngine& eng, const ModelParams& mp, cplx u, cplx up, int i2,
                 int j2) {
  const double l = mp.l, eta = mp.eta();
  const cplx base = cplx(0.0, (mp.lambda0 - mp.v).imag()) + 2.0 * (i2 - j2) * l * eta +
                    2.0 * l * eta;
  const cplx num = eng.cap_G(l, eta, base + (up - u) / 2.0);
  const cplx den = eng.cap_G(l, eta, base + (u - up) / 2.0);
  if (std::abs(den) < 1e-13)
    throw std::domain_error("fab_ratio_B: denominator vanishes at this spectral pair");
  return num / den;
}

Eigen::VectorXcd y_conjugation_fab(const ThetaEngine& eng, const ModelParams& mp, cplx u,
                                   cplx up) {
  const int two_r = 2 * mp.r;
  Eigen::MatrixXcd Ar(two_r, two_r), Br(two_r, two_r);
  for (int i2 = 1; i2 <= two_r; ++i2)
    for (int j2 = 1; j2 <= two_r; ++j2) {
      Ar(i2 - 1, j2 - 1) = fab_ratio_A(eng, mp, u, up, i2, j2);
      Br(i2 - 1, j2 - 1) = fab_ratio_B(eng, mp, u, up, i2, j2);
    }
  auto A = [&](int i2, int j2) { return Ar(wrap_index(i2, two_r) - 1, wrap_index(j2, two_r) - 1); };
  auto B = [&](int i2, int j2) { return Br(wrap_index(i2, two_r) - 1, wrap_index(j2, two_r) - 1); };

  double compat = 0.0;
  for (int i2 = 1; i2 <= two_r; ++i2)
    for (int j2 = 1; j2 <= two_r; ++j2) {
      const cplx lhs = B(i2 + 1, j2 + 1) * A(i2, j2);
      const cplx rhs = A(i2 + 1, j2 - 1) * B(i2, j2);
      compat = std::max(compat, std::abs(lhs - rhs) / std::max(std::abs(lhs), kTiny));
    }
  if (compat > kCompatTol)
    throw std::domain_error("y_conjugation_fab: ratio families are incompatible, residual " +
                            std::to_string(compat));

  // Closure of the recurrences around the torus; holds when lambda0 - v is
  // an even integer multiple of l eta.
  for (const auto& [si, sj] : {std::pair<int, int>{1, 1}, std::pair<int, int>{1, 2}}) {
    cplx prodA = 1.0, prodB = 1.0;
    for (int k = 0; k < mp.r; ++k) {
      prodA *= A(si + k, sj + k);
      prodB *= B(si + k, sj - k);
    }
    if (std::abs(prodA - 1.0) > kClosureTol || std::abs(prodB - 1.0) > kClosureTol)
      throw std::domain_error(
          "y_conjugation_fab: recurrence closure fails; lambda0 - v must be an even integer "
          "multiple of l eta");
  }

  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(two_r, two_r);
  std::vector<std::vector<bool>> seen(two_r, std::vector<bool>(two_r, false));
  std::queue<std::pair<int, int>> bfs;
  for (const auto& [si, sj] : {std::pair<int, int>{1, 1}, std::pair<int, int>{1, 2}}) {
    y(si - 1, sj - 1) = 1.0;
    seen[si - 1][sj - 1] = true;
    bfs.emplace(si, sj);
  }
  while (!bfs.empty()) {
    const auto [i2, j2] = bfs.front();
    bfs.pop();
    const cplx cur = y(i2 - 1, j2 - 1);
    const std::array<std::tuple<int, int, cplx>, 4> moves = {
        std::tuple<int, int, cplx>{i2 + 1, j2 + 1, cur * A(i2, j2)},
        std::tuple<int, int, cplx>{i2 + 1, j2 - 1, cur * B(i2, j2)},
        std::tuple<int, int, cplx>{i2 - 1, j2 - 1, cur / A(i2 - 1, j2 - 1)},
        std::tuple<int, int, cplx>{i2 - 1, j2 + 1, cur / B(i2 - 1, j2 + 1)}};
    for (const auto& [ti, tj, val] : moves) {
      const int wi = wrap_index(ti, two_r), wj = wrap_index(tj, two_r);
      if (seen[wi - 1][wj - 1]) continue;
      y(wi - 1, wj - 1) = val;
      seen[wi - 1][wj - 1] = true;
      bfs.emplace(wi, wj);
    }
  }

  // The recurrences fix the diagonal that intertwines the swapped-argument
  // pair from the right; the conjugator itself is its inverse.
  Eigen::VectorXcd Y(two_r * two_r);
  for (int j2 = 1; j2 <= two_r; ++j2)
    for (int i2 = 1; i2 <= two_r; ++i2) {
      const cplx val = y(i2 - 1, j2 - 1);
      if (std::abs(val) < kTiny)
        throw std::domain_error("y_conjugation_fab: propagated weight vanished");
      Y((j2 - 1) * two_r + (i2 - 1)) = 1.0 / val;
    }
  return Y;
}

cplx fab_quasi_d(const ModelParams& mp, int i2, int j2) {
  const int two_r = 2 * mp.r;
  const double l = mp.l, eta = mp.eta();
  const cplx off = mp.lambda0 - mp.v;
  if (fab_branch(two_r, i2, j2) == 1) return 2.0 * (2.0 * j2 + 1.0) * l * eta + off;
  return -2.0 * (2.0 * i2 + 1.0) * l * eta - off;
}

cplx fab_similarity_a(const ModelParams& mp, int k) {
  const double l = mp.l, eta = mp.eta();
  const cplx ipi(0.0, kPi);
  return std::exp(-4.0 * k * (k + static_cast<double>(mp.r_second)) * l * l * eta * ipi);
}

std::vector<Report> quasi_periodicity_fab(const RepBasis& basis, const ModelParams& mp, cplx u,
                                          const Eigen::MatrixXcd& tau_consts) {
  const ThetaEngine& eng = *basis.eng;
  const cplx tau = eng.params().tau;
  const double l = mp.l;
  const cplx ipi(0.0, kPi);
  const int two_r = 2 * mp.r;
  std::vector<Report> out;
  auto timed = [&out](const std::string& id, const std::string& anchor, auto fn) {
    const auto t0 = std::chrono::steady_clock::now();
    const double res = fn();
    out.push_back({id, anchor, res, kQuasiTol, res < kQuasiTol, elapsed(t0)});
  };

  const FabS S0 = build_S_fab(basis, mp, u, tau_consts);
  const FabS S1 = build_S_fab(basis, mp, u + 1.0, tau_consts);
  const FabS St = build_S_fab(basis, mp, u + tau, tau_consts);
  const SiteMap U1 = unitary_U(basis, 1);
  const SiteMap U3 = unitary_U(basis, 3);

  timed("fabricius.quasi.s_u1", "U1 S(u) = e^{-l pi i} S(u+1) entrywise", [&] {
    double worst = 0.0;
    const cplx ph = std::exp(-l * ipi);
    for (const auto& [i2, j2] : fab_transitions(two_r)) {
      const Eigen::MatrixXcd lhs = U1 * S0.grid[i2 - 1][j2 - 1];
      const Eigen::MatrixXcd rhs = ph * S1.grid[i2 - 1][j2 - 1];
      worst = std::max(worst, (lhs - rhs).norm() / std::max(lhs.norm(), kTiny));
    }
    return worst;
  });

  timed("fabricius.quasi.s_u3",
        "U3 S(u) = e^{l(tau-1) pi i + 2 l pi i u + 2 l pi i d(i2,j2)} S(u+tau) entrywise", [&] {
          double worst = 0.0;
          for (const auto& [i2, j2] : fab_transitions(two_r)) {
            const cplx d = fab_quasi_d(mp, i2, j2);
            const cplx ph =
                std::exp(l * (tau - 1.0) * ipi + 2.0 * l * u * ipi + 2.0 * l * d * ipi);
            const Eigen::MatrixXcd lhs = U3 * S0.grid[i2 - 1][j2 - 1];
            const Eigen::MatrixXcd rhs = ph * St.grid[i2 - 1][j2 - 1];
            worst = std::max(worst, (lhs - rhs).norm() / std::max(lhs.norm(), kTiny));
          }
          return worst;
        });

  const Eigen::MatrixXcd Q0 = qr_fab(basis, mp, u, tau_consts).matrix;
  const Eigen::MatrixXcd Q1 = qr_fab(basis, mp, u + 1.0, tau_consts).matrix;
  const Eigen::MatrixXcd Qt = qr_fab(basis, mp, u + tau, tau_consts).matrix;
  const Eigen::MatrixXcd Q2 = qr_fab(basis, mp, u + 2.0, tau_consts).matrix;
  const double nN = static_cast<double>(mp.N);

  timed("fabricius.quasi.qr_u1", "U1^N Q_R(u) = e^{-N l pi i} Q_R(u+1)", [&] {
    const Eigen::MatrixXcd lhs = tensor_power(U1, mp.N) * Q0;
    const Eigen::MatrixXcd rhs = std::exp(-nN * l * ipi) * Q1;
    return (lhs - rhs).norm() / std::max(lhs.norm(), kTiny);
  });

  timed("fabricius.quasi.qr_u3", "U3^N Q_R(u) = e^{N l pi i (tau-1) + 2 N l pi i u} Q_R(u+tau)",
        [&] {
          const Eigen::MatrixXcd lhs = tensor_power(U3, mp.N) * Q0;
          const Eigen::MatrixXcd rhs =
              std::exp(nN * l * (tau - 1.0) * ipi + 2.0 * nN * l * u * ipi) * Qt;
          return (lhs - rhs).norm() / std::max(lhs.norm(), kTiny);
        });

  timed("fabricius.quasi.qr_period", "Q_R(u+2) = Q_R(u)",
        [&] { return (Q2 - Q0).norm() / std::max(Q0.norm(), kTiny); });

  return out;
}

}  // namespace vertexq
