#include "vertexq/qbaxter.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace vertexq {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kQuasiTol = 1e-7;
constexpr double kMaxDim = 65536.0;
constexpr double kTiny = 1e-300;

// Gauge values live at half the modulus.
ThetaEngine half_modulus_engine(const ThetaEngine& eng) {
  ThetaParams p = eng.params();
  p.tau = p.tau / 2.0;
  return ThetaEngine(p);
}

cplx p_at(const ThetaEngine& half, double l, double eta, int k) {
  const cplx z = (2.0 * k - 1.0) * l * eta;
  const cplx den = half.theta(0, 1, z);
  if (std::abs(den) < 1e-13)
    throw std::domain_error("p_values: th01 vanishes at gauge index " + std::to_string(k));
  return -half.theta(0, 0, z) / den;
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

PVector p_values(const ThetaEngine& eng, const ModelParams& mp) {
  const ThetaEngine half = half_modulus_engine(eng);
  const double l = mp.l, eta = mp.eta();
  PVector out;
  out.p.resize(mp.r);
  for (int k = 1; k <= mp.r; ++k) out.p(k - 1) = p_at(half, l, eta, k);
  const double lo = std::abs(p_at(half, l, eta, 0) - out.p(0));
  const double hi = std::abs(p_at(half, l, eta, mp.r + 1) - out.p(mp.r - 1));
  out.boundary_residual = std::max(lo, hi);
  return out;
}

Eigen::VectorXcd x_values(const ThetaEngine& eng, const ModelParams& mp) {
  const ThetaEngine half = half_modulus_engine(eng);
  Eigen::VectorXcd x(mp.r);
  for (int k = 1; k <= mp.r; ++k) {
    x(k - 1) = half.theta(0, 1, (2.0 * k - 1.0) * mp.l * mp.eta());
    if (std::abs(x(k - 1)) < 1e-13)
      throw std::domain_error("x_values: th01 vanishes at gauge index " + std::to_string(k));
  }
  return x;
}

ThetaVector null_vector_f(const RepBasis& basis, int sign, cplx lambda, cplx u) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("null_vector_f: sign must be +-1");
  const double l = basis.l;
  const cplx a = (static_cast<double>(sign) * lambda + u) / 2.0 + (1.0 - l) * basis.eta;
  return basis.bracket_vector(a);
}

cplx bax_lambda(const ModelParams& mp, int k) { return 2.0 * (2.0 * k - 1.0) * mp.l * mp.eta(); }

bool bax_transition_allowed(int r, int i2, int j2) {
  if (i2 < 1 || i2 > r || j2 < 1 || j2 > r) return false;
  if (i2 == j2 + 1 || i2 == j2 - 1) return true;
  return (i2 == j2) && (i2 == 1 || i2 == r);
}

int bax_branch(int r, int i2, int j2) {
  if (!bax_transition_allowed(r, i2, j2))
    throw std::invalid_argument("bax_branch: transition not allowed");
  if (i2 == j2 + 1) return 1;
  if (i2 == j2 - 1) return -1;
  return (i2 == 1) ? -1 : 1;
}

int bax_quasi_d(int r, int i2, int j2) {
  if (!bax_transition_allowed(r, i2, j2))
    throw std::invalid_argument("bax_quasi_d: transition not allowed");
  if (i2 == j2 + 1) return j2;
  if (i2 == j2 - 1) return -i2;
  return 0;
}

std::vector<std::pair<int, int>> bax_transitions(int r) {
  std::vector<std::pair<int, int>> t;
  for (int j2 = 1; j2 <= r; ++j2)
    for (int i2 = 1; i2 <= r; ++i2)
      if (bax_transition_allowed(r, i2, j2)) t.emplace_back(i2, j2);
  return t;
}

TwistedL twisted_l_elements(const RepBasis& basis, const ModelParams& mp, cplx u, int i2,
                            int j2) {
  if (i2 < 1 || i2 > mp.r || j2 < 1 || j2 > mp.r)
    throw std::invalid_argument("twisted_l_elements: index out of range");
  const ThetaEngine half = half_modulus_engine(*basis.eng);
  const cplx pi2 = p_at(half, mp.l, mp.eta(), i2);
  const cplx pj2 = p_at(half, mp.l, mp.eta(), j2);
  const auto blk = l_blocks(*basis.eng, basis, u);
  TwistedL t;
  t.alpha = blk[0][0] - pi2 * blk[1][0];
  t.beta = pj2 * blk[0][0] + blk[0][1] - pi2 * pj2 * blk[1][0] - pi2 * blk[1][1];
  t.gamma = blk[1][0];
  t.delta = pj2 * blk[1][0] + blk[1][1];
  return t;
}

Eigen::MatrixXcd draw_tau_consts(int dim, int r, unsigned long long seed) {
  std::mt19937_64 gen(seed);
  auto unit = [&gen] { return std::ldexp(static_cast<double>(gen() >> 11), -53); };
  Eigen::MatrixXcd t(dim, r);
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < dim; ++k) {
      const double rad = 0.5 + 1.5 * unit();
      const double ang = 2.0 * kPi * unit();
      t(k, j) = std::polar(rad, ang);
    }
  return t;
}

BaxterS build_S_bax(const RepBasis& basis, const ModelParams& mp, cplx u,
                    const Eigen::MatrixXcd& tau_consts) {
  const int r = mp.r, d = basis.dim;
  if (tau_consts.rows() != d || tau_consts.cols() != r)
    throw std::invalid_argument("build_S_bax: tau_consts must be dim x r");
  BaxterS S;
  S.r = r;
  S.tau_consts = tau_consts;
  S.grid.assign(r, std::vector<SiteMap>(r, SiteMap::Zero(d, d)));
  std::map<std::pair<int, int>, Eigen::VectorXcd> cache;  // (j2, sign) -> coeffs
  for (const auto& [i2, j2] : bax_transitions(r)) {
    const int sign = bax_branch(r, i2, j2);
    auto it = cache.find({j2, sign});
    if (it == cache.end()) {
      const Eigen::VectorXcd c =
          basis.to_coeffs(null_vector_f(basis, sign, bax_lambda(mp, j2), u));
      it = cache.emplace(std::make_pair(j2, sign), c).first;
    }
    S.grid[i2 - 1][j2 - 1] = it->second * tau_consts.col(j2 - 1).transpose();
  }
  return S;
}

BigOp qr_bax(const RepBasis& basis, const ModelParams& mp, cplx u,
             const Eigen::MatrixXcd& tau_consts) {
  const int r = mp.r, d = basis.dim;
  const double need = std::pow(static_cast<double>(d), mp.N);
  if (need > kMaxDim)
    throw std::length_error("qr_bax: chain needs dimension " + std::to_string(need) +
                            ", budget is " + std::to_string(kMaxDim));
  const BaxterS S = build_S_bax(basis, mp, u, tau_consts);
  std::vector<std::vector<Eigen::MatrixXcd>> acc(r, std::vector<Eigen::MatrixXcd>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) acc[i][j] = S.grid[i][j];
  const int hd = static_cast<int>(std::lround(need));
  for (int step = 1; step < mp.N; ++step) {
    const int cur = acc[0][0].rows();
    std::vector<std::vector<Eigen::MatrixXcd>> nxt(
        r, std::vector<Eigen::MatrixXcd>(r, Eigen::MatrixXcd::Zero(cur * d, cur * d)));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        for (int k = 0; k < r; ++k) {
          if (!bax_transition_allowed(r, k + 1, j + 1)) continue;
          nxt[i][j] += kron(acc[i][k], S.grid[k][j]);
        }
    acc.swap(nxt);
  }
  BigOp q;
  q.matrix = Eigen::MatrixXcd::Zero(hd, hd);
  for (int i = 0; i < r; ++i) q.matrix += acc[i][i];
  q.params = &mp;
  return q;
}

std::pair<int, int> wF_wG_tables(int r, int j3, int i3, int j2, int i2) {
  auto kind = [r](int to, int from) {
    if (to == from + 1) return 0;
    if (to == from - 1) return 1;
    if (to == from && to == 1) return 2;
    if (to == from && to == r) return 3;
    throw std::invalid_argument("wF_wG_tables: transition not allowed");
  };
  const int jc = kind(j3, j2);
  const int ic = kind(i3, i2);
  int wF = 0, wG = 0;
  switch (ic) {
    case 0:  // i3 = i2+1
      switch (jc) {
        case 0: wF = i2 - j2;         wG = i2 + j2;          break;
        case 1: wF = i2 + j2 - 1;     wG = i2 - j2 + 1;      break;
        case 2: wF = i2;              wG = i2;               break;
        case 3: wF = i2 - r;          wG = i2 + r;           break;
      }
      break;
    case 1:  // i3 = i2-1
      switch (jc) {
        case 0: wF = -i2 - j2 + 1;    wG = -i2 + j2 + 1;     break;
        case 1: wF = -i2 + j2;        wG = -i2 - j2 + 2;     break;
        case 2: wF = -i2 + 1;         wG = -i2 + 1;          break;
        case 3: wF = -i2 - r + 1;     wG = -i2 + r + 1;      break;
      }
      break;
    case 2:  // i3 = i2 = 1
      switch (jc) {
        case 0: wF = -j2;             wG = j2;               break;
        case 1: wF = j2 - 1;          wG = -j2 + 1;          break;
        case 2: wF = 0;               wG = 0;                break;
        case 3: wF = r;               wG = r;                break;
      }
      break;
    case 3:  // i3 = i2 = r
      switch (jc) {
        case 0: wF = -j2 + r;         wG = j2 + r;           break;
        case 1: wF = j2 + r - 1;      wG = -j2 + r + 1;      break;
        case 2: wF = -r;              wG = r;                break;
        case 3: wF = 0;               wG = 2 * r;            break;
      }
      break;
  }
  return {wF, wG};
}

Eigen::MatrixXcd w_matrix_bax(const RepBasis& basis, const ModelParams& mp,
                              const Eigen::MatrixXcd& tau_consts, int j, int i, cplx u,
                              cplx v) {
  const int r = mp.r, d = basis.dim;
  if (j < 1 || j > d || i < 1 || i > d)
    throw std::invalid_argument("w_matrix_bax: site index out of range");
  if (tau_consts.rows() != d || tau_consts.cols() != r)
    throw std::invalid_argument("w_matrix_bax: tau_consts must be dim x r");
  const ThetaEngine& eng = *basis.eng;
  const double l = mp.l, eta = mp.eta();
  Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(r * r, r * r);
  for (int j2 = 1; j2 <= r; ++j2)
    for (int j3 = 1; j3 <= r; ++j3) {
      if (!bax_transition_allowed(r, j3, j2)) continue;
      for (int i2 = 1; i2 <= r; ++i2)
        for (int i3 = 1; i3 <= r; ++i3) {
          if (!bax_transition_allowed(r, i3, i2)) continue;
          const auto [wF, wG] = wF_wG_tables(r, j3, i3, j2, i2);
          const cplx fa = (u + v) / 2.0 + 2.0 * wF * l * eta;
          const cplx ga = (v - u) / 2.0 + 2.0 * wG * l * eta;
          const cplx val = std::conj(tau_consts(j - 1, j2 - 1)) * tau_consts(i - 1, i2 - 1) *
                           eng.cap_F(l, eta, fa) * eng.cap_G(l, eta, ga);
          W((j3 - 1) * r + (i3 - 1), (j2 - 1) * r + (i2 - 1)) = val;
        }
    }
  return W;
}

Eigen::VectorXcd bax_t_chain(const ThetaEngine& eng, const ModelParams& mp, cplx u, cplx v,
                             cplx t1, cplx t2) {
  if (std::abs(t1) < kTiny || std::abs(t2) < kTiny)
    throw std::invalid_argument("bax_t_chain: seeds must be nonzero");
  const int r = mp.r;
  const double l = mp.l, eta = mp.eta();
  const cplx du = (u - v) / 2.0;
  auto ratio = [&](int m) {
    const cplx num = eng.cap_G(l, eta, du + 2.0 * m * l * eta);
    const cplx den = eng.cap_G(l, eta, -du + 2.0 * m * l * eta);
    if (std::abs(den) < 1e-13 || std::abs(num) < 1e-13)
      throw std::domain_error("bax_t_chain: G vanishes along the recurrence at m=" +
                              std::to_string(m));
    return num / den;
  };
  const int lo = 2 - r;  // t_m for m in [2-r, 2r]
  auto idx = [lo](int m) { return m - lo; };
  Eigen::VectorXcd t(3 * r - 1);
  t(idx(1)) = t1;
  t(idx(2)) = t2;
  for (int m = 1; m + 2 <= 2 * r; ++m) t(idx(m + 2)) = t(idx(m)) * ratio(m);
  for (int m = 2; m - 2 >= lo; --m) t(idx(m - 2)) = t(idx(m)) / ratio(m - 2);
  return t;
}

Eigen::VectorXcd y_conjugation_bax(const ThetaEngine& eng, const ModelParams& mp, cplx u,
                                   cplx v, cplx t1, cplx t2) {
  const int r = mp.r;
  const Eigen::VectorXcd t = bax_t_chain(eng, mp, u, v, t1, t2);
  const int lo = 2 - r;
  auto idx = [lo](int m) { return m - lo; };
  Eigen::VectorXcd y(r * r);
  for (int j2 = 1; j2 <= r; ++j2)
    for (int i2 = 1; i2 <= r; ++i2)
      y((j2 - 1) * r + (i2 - 1)) = t(idx(j2 + i2)) * t(idx(-j2 + i2 + 1));
  return y;
}

std::vector<Report> quasi_periodicity_bax(const RepBasis& basis, const ModelParams& mp, cplx u,
                                          const Eigen::MatrixXcd& tau_consts) {
  const ThetaEngine& eng = *basis.eng;
  const cplx tau = eng.params().tau;
  const double l = mp.l, eta = mp.eta();
  const cplx ipi(0.0, kPi);
  std::vector<Report> out;
  auto timed = [&out](const std::string& id, const std::string& anchor, auto fn) {
    const auto t0 = std::chrono::steady_clock::now();
    const double res = fn();
    out.push_back({id, anchor, res, kQuasiTol, res < kQuasiTol, elapsed(t0)});
  };

  const BaxterS S0 = build_S_bax(basis, mp, u, tau_consts);
  const BaxterS S1 = build_S_bax(basis, mp, u + 1.0, tau_consts);
  const BaxterS St = build_S_bax(basis, mp, u + tau, tau_consts);
  const SiteMap U1 = unitary_U(basis, 1);
  const SiteMap U3 = unitary_U(basis, 3);

  timed("baxter.quasi.s_u1", "U1 S(u) = e^{-l pi i} S(u+1) entrywise", [&] {
    double worst = 0.0;
    const cplx ph = std::exp(-l * ipi);
    for (const auto& [i2, j2] : bax_transitions(mp.r)) {
      const Eigen::MatrixXcd lhs = U1 * S0.grid[i2 - 1][j2 - 1];
      const Eigen::MatrixXcd rhs = ph * S1.grid[i2 - 1][j2 - 1];
      worst = std::max(worst, (lhs - rhs).norm() / std::max(lhs.norm(), kTiny));
    }
    return worst;
  });

  timed("baxter.quasi.s_u3",
        "U3 S(u) = e^{l(tau-1) pi i + 2 l pi i u + 8 d l^2 eta pi i} S(u+tau) entrywise", [&] {
          double worst = 0.0;
          for (const auto& [i2, j2] : bax_transitions(mp.r)) {
            const int d = bax_quasi_d(mp.r, i2, j2);
            const cplx ph =
                std::exp(l * (tau - 1.0) * ipi + 2.0 * l * u * ipi + 8.0 * d * l * l * eta * ipi);
            const Eigen::MatrixXcd lhs = U3 * S0.grid[i2 - 1][j2 - 1];
            const Eigen::MatrixXcd rhs = ph * St.grid[i2 - 1][j2 - 1];
            worst = std::max(worst, (lhs - rhs).norm() / std::max(lhs.norm(), kTiny));
          }
          return worst;
        });

  const Eigen::MatrixXcd Q0 = qr_bax(basis, mp, u, tau_consts).matrix;
  const Eigen::MatrixXcd Q1 = qr_bax(basis, mp, u + 1.0, tau_consts).matrix;
  const Eigen::MatrixXcd Qt = qr_bax(basis, mp, u + tau, tau_consts).matrix;
  const Eigen::MatrixXcd Q2 = qr_bax(basis, mp, u + 2.0, tau_consts).matrix;
  const double nN = static_cast<double>(mp.N);

  timed("baxter.quasi.qr_u1", "U1^N Q_R(u) = e^{-N l pi i} Q_R(u+1)", [&] {
    const Eigen::MatrixXcd lhs = tensor_power(U1, mp.N) * Q0;
    const Eigen::MatrixXcd rhs = std::exp(-nN * l * ipi) * Q1;
    return (lhs - rhs).norm() / std::max(lhs.norm(), kTiny);
  });

  timed("baxter.quasi.qr_u3", "U3^N Q_R(u) = e^{N l pi i (tau-1) + 2 N l pi i u} Q_R(u+tau)",
        [&] {
          const Eigen::MatrixXcd lhs = tensor_power(U3, mp.N) * Q0;
          const Eigen::MatrixXcd rhs =
              std::exp(nN * l * (tau - 1.0) * ipi + 2.0 * nN * l * u * ipi) * Qt;
          return (lhs - rhs).norm() / std::max(lhs.norm(), kTiny);
        });

  timed("baxter.quasi.qr_period", "Q_R(u+2) = Q_R(u)",
        [&] { return (Q2 - Q0).norm() / std::max(Q0.norm(), kTiny); });

  return out;
}

}  // namespace vertexq
