#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "vertexq/qbaxter.hpp"

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using vertexq::BaxterS;
using vertexq::cplx;
using vertexq::ModelParams;
using vertexq::RepBasis;
using vertexq::ThetaEngine;
using vertexq::ThetaParams;

namespace {

const cplx I(0.0, 1.0);
constexpr unsigned long long kSeed = 20260822ULL;

double mat_rel(const MatrixXcd& got, const MatrixXcd& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

ModelParams make_mp(double l, int N, int r, int r_prime, cplx tau = cplx(0, 1)) {
  ModelParams mp;
  mp.l = l;
  mp.N = N;
  mp.r = r;
  mp.r_prime = r_prime;
  mp.tau = tau;
  return mp;
}

ThetaEngine half_engine(const ThetaEngine& eng) {
  ThetaParams p = eng.params();
  p.tau = p.tau / 2.0;
  return ThetaEngine(p);
}

}  // namespace

TEST_CASE("gauge values: boundary identities and an independent ratio") {
  ThetaEngine eng{ThetaParams{}};
  const ModelParams mp = make_mp(1.0, 3, 4, 1);
  const auto pv = vertexq::p_values(eng, mp);
  CHECK(pv.p.size() == 4);
  CHECK(pv.boundary_residual < 1e-10);

  // second value from the term-by-term oracle at half the modulus
  const cplx z = 3.0 * mp.l * mp.eta();
  const cplx half_tau = mp.tau / 2.0;
  const cplx want = -oracles::theta_oracle(0, 0, z, half_tau) /
                    oracles::theta_oracle(0, 1, z, half_tau);
  CHECK(std::abs(pv.p(1) - want) < 1e-12 * std::max(1.0, std::abs(want)));

  const ModelParams mp5 = make_mp(0.5, 2, 5, 1);
  CHECK(vertexq::p_values(eng, mp5).boundary_residual < 1e-10);
}

TEST_CASE("null vectors are annihilated by the upper-right twisted element") {
  ThetaEngine eng{ThetaParams{}};
  const ModelParams mp = make_mp(1.0, 3, 4, 1);
  const RepBasis basis = vertexq::build_basis(eng, mp.l, mp.eta(), 7);
  for (cplx u : {cplx(0.17, 0.0), cplx(0.05, 0.03)}) {
    for (const auto& [i2, j2] : vertexq::bax_transitions(mp.r)) {
      const auto tw = vertexq::twisted_l_elements(basis, mp, u, i2, j2);
      const int sign = vertexq::bax_branch(mp.r, i2, j2);
      const VectorXcd c =
          basis.to_coeffs(vertexq::null_vector_f(basis, sign, vertexq::bax_lambda(mp, j2), u));
      CHECK((tw.beta * c).norm() <= 1e-8 * tw.beta.norm() * c.norm());
    }
  }

  // the degeneracy is specific to the gauge pair: negating the row gauge kills it
  {
    const cplx u(0.17, 0.0);
    const int i2 = 2, j2 = 1;
    const auto tw_good = vertexq::twisted_l_elements(basis, mp, u, i2, j2);
    const auto blk = vertexq::l_blocks(eng, basis, u);
    // recover p_i2, p_j2 from the assembled elements, then flip the row gauge
    const cplx pj2 = vertexq::p_values(eng, mp).p(j2 - 1);
    const cplx pi2 = vertexq::p_values(eng, mp).p(i2 - 1);
    const vertexq::SiteMap bad = -pj2 * blk[0][0] + blk[0][1] + pi2 * pj2 * blk[1][0] -
                                 pi2 * blk[1][1];
    const VectorXcd c =
        basis.to_coeffs(vertexq::null_vector_f(basis, 1, vertexq::bax_lambda(mp, j2), u));
    CHECK((tw_good.beta * c).norm() <= 1e-8 * tw_good.beta.norm() * c.norm());
    CHECK((bad * c).norm() > 1e-3 * bad.norm() * c.norm());
  }

  const ModelParams mp5 = make_mp(0.5, 2, 5, 1);
  const RepBasis basis5 = vertexq::build_basis(eng, mp5.l, mp5.eta(), 7);
  const cplx u5(0.21, 0.0);
  for (const auto& [i2, j2] : vertexq::bax_transitions(mp5.r)) {
    const auto tw = vertexq::twisted_l_elements(basis5, mp5, u5, i2, j2);
    const int sign = vertexq::bax_branch(mp5.r, i2, j2);
    const VectorXcd c = basis5.to_coeffs(
        vertexq::null_vector_f(basis5, sign, vertexq::bax_lambda(mp5, j2), u5));
    CHECK((tw.beta * c).norm() <= 1e-8 * tw.beta.norm() * c.norm());
  }
}

TEST_CASE("diagonal twisted elements act as shifts by two eta") {
  ThetaEngine eng{ThetaParams{}};
  const ThetaEngine half = half_engine(eng);
  const ModelParams mp = make_mp(1.0, 3, 4, 1);
  const RepBasis basis = vertexq::build_basis(eng, mp.l, mp.eta(), 7);
  const double l = mp.l, eta = mp.eta();
  const cplx u(0.19, 0.0);
  const VectorXcd X = vertexq::x_values(eng, mp);
  for (const auto& [i2, j2] : vertexq::bax_transitions(mp.r)) {
    const auto tw = vertexq::twisted_l_elements(basis, mp, u, i2, j2);
    const int sign = vertexq::bax_branch(mp.r, i2, j2);
    const cplx lam = vertexq::bax_lambda(mp, j2);
    const cplx ratio = half.theta(0, 1, lam / 2.0) /
                       half.theta(0, 1, (lam + 4.0 * sign * l * eta) / 2.0);
    // the shifted gauge value is the diagonal normalizer at the target index
    CHECK(std::abs(half.theta(0, 1, lam / 2.0) - X(j2 - 1)) < 1e-12);
    const VectorXcd cu =
        basis.to_coeffs(vertexq::null_vector_f(basis, sign, lam, u));
    const VectorXcd cup =
        basis.to_coeffs(vertexq::null_vector_f(basis, sign, lam, u + 2.0 * eta));
    const VectorXcd cdn =
        basis.to_coeffs(vertexq::null_vector_f(basis, sign, lam, u - 2.0 * eta));
    const VectorXcd lhs_a = tw.alpha * cu;
    const VectorXcd rhs_a = ratio * 2.0 * eng.bracket(u - 2.0 * l * eta) * cup;
    CHECK((lhs_a - rhs_a).norm() <= 1e-8 * std::max(1.0, rhs_a.norm()));
    const VectorXcd lhs_d = tw.delta * cu;
    const VectorXcd rhs_d = (1.0 / ratio) * 2.0 * eng.bracket(u + 2.0 * l * eta) * cdn;
    CHECK((lhs_d - rhs_d).norm() <= 1e-8 * std::max(1.0, rhs_d.norm()));
  }
}

TEST_CASE("column grid: sparsity, rank structure, and seeded constants") {
  ThetaEngine eng{ThetaParams{}};
  const ModelParams mp = make_mp(1.0, 3, 4, 1);
  const RepBasis basis = vertexq::build_basis(eng, mp.l, mp.eta(), 7);

  const MatrixXcd tau = vertexq::draw_tau_consts(basis.dim, mp.r, kSeed);
  CHECK(tau.rows() == 3);
  CHECK(tau.cols() == 4);
  for (int j = 0; j < tau.cols(); ++j)
    for (int k = 0; k < tau.rows(); ++k) {
      CHECK(std::abs(tau(k, j)) >= 0.5 - 1e-12);
      CHECK(std::abs(tau(k, j)) <= 2.0 + 1e-12);
    }
  CHECK((vertexq::draw_tau_consts(basis.dim, mp.r, kSeed) - tau).norm() == 0.0);
  CHECK((vertexq::draw_tau_consts(basis.dim, mp.r, kSeed + 1) - tau).norm() > 1e-3);

  const cplx u(0.23, 0.0);
  const BaxterS S = vertexq::build_S_bax(basis, mp, u, tau);
  CHECK(S.r == 4);
  for (int i2 = 1; i2 <= 4; ++i2)
    for (int j2 = 1; j2 <= 4; ++j2) {
      const MatrixXcd& E = S.grid[i2 - 1][j2 - 1];
      if (!vertexq::bax_transition_allowed(4, i2, j2)) {
        CHECK(E.norm() == 0.0);
        continue;
      }
      Eigen::JacobiSVD<MatrixXcd> svd(E);
      CHECK(svd.singularValues()(1) < 1e-10 * svd.singularValues()(0));
      const int sign = vertexq::bax_branch(4, i2, j2);
      const VectorXcd c = basis.to_coeffs(
          vertexq::null_vector_f(basis, sign, vertexq::bax_lambda(mp, j2), u));
      for (int k = 0; k < basis.dim; ++k)
        CHECK((E.col(k) - tau(k, j2 - 1) * c).norm() < 1e-12 * std::max(1.0, c.norm()));
    }
}

TEST_CASE("conjugated two-block matrix is triangular with the shifted grids") {
  ThetaEngine eng{ThetaParams{}};
  const ModelParams mp = make_mp(1.0, 3, 4, 1);
  const RepBasis basis = vertexq::build_basis(eng, mp.l, mp.eta(), 7);
  const int r = mp.r, d = basis.dim, half = r * d;
  const double l = mp.l, eta = mp.eta();
  const cplx u(0.19, 0.0);
  const MatrixXcd tau = vertexq::draw_tau_consts(d, r, kSeed);
  const BaxterS S0 = vertexq::build_S_bax(basis, mp, u, tau);
  const BaxterS Sp = vertexq::build_S_bax(basis, mp, u + 2.0 * eta, tau);
  const BaxterS Sm = vertexq::build_S_bax(basis, mp, u - 2.0 * eta, tau);
  const auto blk = vertexq::l_blocks(eng, basis, u);
  const VectorXcd p = vertexq::p_values(eng, mp).p;
  const VectorXcd X = vertexq::x_values(eng, mp);

  MatrixXcd B = MatrixXcd::Zero(2 * half, 2 * half);
  for (int ip = 0; ip < 2; ++ip)
    for (int jp = 0; jp < 2; ++jp)
      for (int i2 = 1; i2 <= r; ++i2)
        for (int j2 = 1; j2 <= r; ++j2)
          B.block(ip * half + (i2 - 1) * d, jp * half + (j2 - 1) * d, d, d) =
              blk[ip][jp] * S0.grid[i2 - 1][j2 - 1];

  MatrixXcd M = MatrixXcd::Identity(2 * half, 2 * half);
  MatrixXcd Minv = MatrixXcd::Identity(2 * half, 2 * half);
  for (int k = 1; k <= r; ++k) {
    M.block(0 * half + (k - 1) * d, 1 * half + (k - 1) * d, d, d) =
        p(k - 1) * MatrixXcd::Identity(d, d);
    Minv.block(0 * half + (k - 1) * d, 1 * half + (k - 1) * d, d, d) =
        -p(k - 1) * MatrixXcd::Identity(d, d);
  }
  const MatrixXcd C = Minv * B * M;

  CHECK(C.block(0, half, half, half).norm() < 1e-8 * B.norm());

  MatrixXcd A = MatrixXcd::Zero(half, half);
  MatrixXcd D = MatrixXcd::Zero(half, half);
  for (int i2 = 1; i2 <= r; ++i2)
    for (int j2 = 1; j2 <= r; ++j2) {
      A.block((i2 - 1) * d, (j2 - 1) * d, d, d) = (X(j2 - 1) / X(i2 - 1)) * 2.0 *
                                                  eng.bracket(u - 2.0 * l * eta) *
                                                  Sp.grid[i2 - 1][j2 - 1];
      D.block((i2 - 1) * d, (j2 - 1) * d, d, d) = (X(i2 - 1) / X(j2 - 1)) * 2.0 *
                                                  eng.bracket(u + 2.0 * l * eta) *
                                                  Sm.grid[i2 - 1][j2 - 1];
    }
  CHECK(mat_rel(C.block(0, 0, half, half), A) < 1e-8);
  CHECK(mat_rel(C.block(half, half, half, half), D) < 1e-8);
}

TEST_CASE("traced product obeys the three-term relation") {
  ThetaEngine eng{ThetaParams{}};
  const ModelParams mp = make_mp(1.0, 3, 4, 1);
  const RepBasis basis = vertexq::build_basis(eng, mp.l, mp.eta(), 7);
  const MatrixXcd tau = vertexq::draw_tau_consts(basis.dim, mp.r, kSeed);
  const double eta = mp.eta();
  for (cplx u : {cplx(0.17, 0.0), cplx(0.05, 0.0), cplx(0.31, 0.0), cplx(-0.11, 0.0),
                 cplx(0.23, 0.04)}) {
    const MatrixXcd T = vertexq::transfer_matrix(eng, basis, u, mp).matrix;
    const MatrixXcd Q0 = vertexq::qr_bax(basis, mp, u, tau).matrix;
    const MatrixXcd Qm = vertexq::qr_bax(basis, mp, u - 2.0 * eta, tau).matrix;
    const MatrixXcd Qp = vertexq::qr_bax(basis, mp, u + 2.0 * eta, tau).matrix;
    const MatrixXcd lhs = T * Q0;
    const MatrixXcd rhs =
        vertexq::h_minus(eng, u, mp) * Qm + vertexq::h_plus(eng, u, mp) * Qp;
    CAPTURE(u.real());
    CHECK((lhs - rhs).norm() < 1e-7 * lhs.norm());
  }

  const ModelParams mp5 = make_mp(0.5, 2, 5, 1);
  const RepBasis basis5 = vertexq::build_basis(eng, mp5.l, mp5.eta(), 7);
  const MatrixXcd tau5 = vertexq::draw_tau_consts(basis5.dim, mp5.r, kSeed);
  const double eta5 = mp5.eta();
  for (cplx u : {cplx(0.21, 0.0), cplx(0.13, 0.0)}) {
    const MatrixXcd T = vertexq::transfer_matrix(eng, basis5, u, mp5).matrix;
    const MatrixXcd Q0 = vertexq::qr_bax(basis5, mp5, u, tau5).matrix;
    const MatrixXcd Qm = vertexq::qr_bax(basis5, mp5, u - 2.0 * eta5, tau5).matrix;
    const MatrixXcd Qp = vertexq::qr_bax(basis5, mp5, u + 2.0 * eta5, tau5).matrix;
    const MatrixXcd lhs = T * Q0;
    const MatrixXcd rhs =
        vertexq::h_minus(eng, u, mp5) * Qm + vertexq::h_plus(eng, u, mp5) * Qp;
    CHECK((lhs - rhs).norm() < 1e-7 * lhs.norm());
  }
}

TEST_CASE("traced product equals an independent cyclic chain sum") {
  ThetaEngine eng{ThetaParams{}};
  const ModelParams mp = make_mp(1.0, 3, 4, 1);
  const RepBasis basis = vertexq::build_basis(eng, mp.l, mp.eta(), 7);
  const MatrixXcd tau = vertexq::draw_tau_consts(basis.dim, mp.r, kSeed);
  const cplx u(0.17, 0.0);
  const MatrixXcd Q = vertexq::qr_bax(basis, mp, u, tau).matrix;

  const BaxterS S = vertexq::build_S_bax(basis, mp, u, tau);
  const int d = basis.dim;
  MatrixXcd Qo = MatrixXcd::Zero(d * d * d, d * d * d);
  for (int c1 = 1; c1 <= mp.r; ++c1)
    for (int c2 = 1; c2 <= mp.r; ++c2)
      for (int c3 = 1; c3 <= mp.r; ++c3) {
        const MatrixXcd& E1 = S.grid[c1 - 1][c3 - 1];
        const MatrixXcd& E2 = S.grid[c2 - 1][c1 - 1];
        const MatrixXcd& E3 = S.grid[c3 - 1][c2 - 1];
        Qo += vertexq::kron(E3, vertexq::kron(E2, E1));
      }
  CHECK(Qo.norm() > 1e-8);
  CHECK((Q - Qo).norm() < 1e-12 * Qo.norm());
  CHECK(std::abs(Q(0, 0) - Qo(0, 0)) < 1e-12 * std::max(1.0, std::abs(Qo(0, 0))));

  // the traced product has the full period of the double brackets
  const MatrixXcd Q2 = vertexq::qr_bax(basis, mp, u + 2.0, tau).matrix;
  CHECK((Q2 - Q).norm() < 1e-10 * Q.norm());
}

TEST_CASE("pair shift tables: printed cases and closed pairings") {
  ThetaEngine eng{ThetaParams{}};
  const ModelParams mp = make_mp(1.0, 3, 4, 1);
  const RepBasis basis = vertexq::build_basis(eng, mp.l, mp.eta(), 7);
  const int r = mp.r;
  const double l = mp.l, eta = mp.eta();
  const MatrixXcd tau = vertexq::draw_tau_consts(basis.dim, r, kSeed);

  for (int j2 = 1; j2 < r; ++j2)
    for (int i2 = 1; i2 < r; ++i2) {
      CHECK(vertexq::wF_wG_tables(r, j2 + 1, i2 + 1, j2, i2).first == i2 - j2);
      CHECK(vertexq::wF_wG_tables(r, j2 + 1, i2 + 1, j2, i2).second == i2 + j2);
    }
  for (int j2 = 2; j2 <= r; ++j2)
    for (int i2 = 2; i2 <= r; ++i2)
      CHECK(vertexq::wF_wG_tables(r, j2 - 1, i2 - 1, j2, i2).second == -i2 - j2 + 2);

  for (cplx u : {cplx(0.13, 0.0), cplx(0.10, 0.07)}) {
    const cplx v(0.29, 0.0);
    const int j = 2, i = 1;
    const MatrixXcd W = vertexq::w_matrix_bax(basis, mp, tau, j, i, u, v);
    for (int j2 = 1; j2 <= r; ++j2)
      for (int j3 = 1; j3 <= r; ++j3)
        for (int i2 = 1; i2 <= r; ++i2)
          for (int i3 = 1; i3 <= r; ++i3) {
            const cplx got = W((j3 - 1) * r + (i3 - 1), (j2 - 1) * r + (i2 - 1));
            if (!vertexq::bax_transition_allowed(r, j3, j2) ||
                !vertexq::bax_transition_allowed(r, i3, i2)) {
              CHECK(std::abs(got) == 0.0);
              continue;
            }
            const int ej = vertexq::bax_branch(r, j3, j2);
            const int ei = vertexq::bax_branch(r, i3, i2);
            const cplx a1 = (static_cast<double>(ej) * vertexq::bax_lambda(mp, j2) -
                             std::conj(u)) /
                                2.0 +
                            (1.0 - l) * eta;
            const cplx a2 =
                (static_cast<double>(ei) * vertexq::bax_lambda(mp, i2) + v) / 2.0 +
                (1.0 - l) * eta;
            const cplx want = std::conj(tau(j - 1, j2 - 1)) * tau(i - 1, i2 - 1) *
                              vertexq::sklyanin_form_closed(eng, l, eta, a1, a2);
            CHECK(std::abs(got - want) < 1e-9 * std::max(1.0, std::abs(want)));
          }
  }

  // a few entries straight from the integral pairing of grid columns
  {
    const cplx u(0.13, 0.0), v(0.29, 0.0);
    const int j = 2, i = 1;
    const MatrixXcd W = vertexq::w_matrix_bax(basis, mp, tau, j, i, u, v);
    const BaxterS Sm = vertexq::build_S_bax(basis, mp, -std::conj(u), tau);
    const BaxterS Sv = vertexq::build_S_bax(basis, mp, v, tau);
    const int picks[3][4] = {{2, 3, 1, 2}, {1, 2, 1, 1}, {2, 3, 3, 2}};
    for (const auto& t4 : picks) {
      const int j3 = t4[0], i3 = t4[1], j2 = t4[2], i2 = t4[3];
      const auto q = vertexq::sklyanin_form(
          eng, l, eta, basis.from_coeffs(Sm.grid[j3 - 1][j2 - 1].col(j - 1)),
          basis.from_coeffs(Sv.grid[i3 - 1][i2 - 1].col(i - 1)), 32);
      const cplx got = W((j3 - 1) * r + (i3 - 1), (j2 - 1) * r + (i2 - 1));
      CHECK(q.certificate < 1e-8);
      CHECK(std::abs(got - q.value) < 1e-7 * std::max(1.0, std::abs(q.value)));
    }
  }
}

TEST_CASE("exchange conjugation by the diagonal y") {
  ThetaEngine eng{ThetaParams{}};
  const ModelParams mp = make_mp(1.0, 3, 4, 1);
  const RepBasis basis = vertexq::build_basis(eng, mp.l, mp.eta(), 7);
  const int r = mp.r;
  const double l = mp.l, eta = mp.eta();
  const MatrixXcd tau = vertexq::draw_tau_consts(basis.dim, r, kSeed);
  const cplx u(0.13, 0.0), v(0.29, 0.0);

  const VectorXcd y = vertexq::y_conjugation_bax(eng, mp, u, v);
  for (int j = 1; j <= basis.dim; ++j)
    for (int i = 1; i <= basis.dim; ++i) {
      const MatrixXcd Wuv = vertexq::w_matrix_bax(basis, mp, tau, j, i, u, v);
      const MatrixXcd Wvu = vertexq::w_matrix_bax(basis, mp, tau, j, i, v, u);
      const MatrixXcd conj =
          y.asDiagonal() * Wuv * y.cwiseInverse().asDiagonal();
      CHECK((conj - Wvu).norm() < 1e-7 * Wvu.norm());
    }

  // ratio identity for every transition-kind combination
  const int jmoves[4][2] = {{2, 3}, {3, 2}, {1, 1}, {4, 4}};  // (j2, j3)
  const int imoves[4][2] = {{2, 3}, {3, 2}, {1, 1}, {4, 4}};
  const cplx du = (u - v) / 2.0;
  for (const auto& jm : jmoves)
    for (const auto& im : imoves) {
      const int j2 = jm[0], j3 = jm[1], i2 = im[0], i3 = im[1];
      const auto [wF, wG] = vertexq::wF_wG_tables(r, j3, i3, j2, i2);
      (void)wF;
      const cplx ratio_y = y((j3 - 1) * r + (i3 - 1)) / y((j2 - 1) * r + (i2 - 1));
      const cplx want = eng.cap_G(l, eta, du + 2.0 * wG * l * eta) /
                        eng.cap_G(l, eta, -du + 2.0 * wG * l * eta);
      CHECK(std::abs(ratio_y - want) < 1e-9 * std::max(1.0, std::abs(want)));
      const bool corner_pair = (j2 == j3) && (i2 == i3);
      if (corner_pair) CHECK(std::abs(want - 1.0) < 1e-12);
    }

  // reflection symmetry of the chain
  const VectorXcd t = vertexq::bax_t_chain(eng, mp, u, v);
  const int lo = 2 - r;
  for (int m = 0; m <= r - 1; ++m)
    CHECK(std::abs(t(m + 1 - lo) - t(-m + 1 - lo)) <
          1e-12 * std::max(1.0, std::abs(t(-m + 1 - lo))));

  // seeds rescale y uniformly and drop out of the conjugation
  const VectorXcd y2 = vertexq::y_conjugation_bax(eng, mp, u, v, 2.0, cplx(0.0, 0.7));
  const cplx scale = y2(0) / y(0);
  for (int k = 1; k < y.size(); ++k)
    CHECK(std::abs(y2(k) / y(k) - scale) < 1e-12 * std::abs(scale));
}

TEST_CASE("two Q operators commute element by element") {
  ThetaEngine eng{ThetaParams{}};
  const ModelParams mp = make_mp(1.0, 3, 4, 1);
  const RepBasis basis = vertexq::build_basis(eng, mp.l, mp.eta(), 7);
  const MatrixXcd tau = vertexq::draw_tau_consts(basis.dim, mp.r, kSeed);
  const auto gram = vertexq::gram_matrix(basis, 32);
  CHECK(gram.certificate < 1e-8);
  const double u = 0.13, v = 0.29;

  {
    const MatrixXcd GH = vertexq::tensor_power(gram.G, mp.N);
    const MatrixXcd QLu =
        vertexq::qr_bax(basis, mp, cplx(-u, 0.0), tau).matrix.adjoint() * GH;
    const MatrixXcd QLv =
        vertexq::qr_bax(basis, mp, cplx(-v, 0.0), tau).matrix.adjoint() * GH;
    const MatrixXcd QRu = vertexq::qr_bax(basis, mp, cplx(u, 0.0), tau).matrix;
    const MatrixXcd QRv = vertexq::qr_bax(basis, mp, cplx(v, 0.0), tau).matrix;
    const MatrixXcd M1 = QLu * QRv;
    const MatrixXcd M2 = QLv * QRu;
    CHECK((M1 - M2).norm() < 1e-7 * M1.norm());
  }

  // two sites: every element is a trace over a product of two pair matrices
  {
    const ModelParams mp2 = make_mp(1.0, 2, 4, 1);
    const int d = basis.dim, r = mp2.r;
    const MatrixXcd GH2 = vertexq::tensor_power(gram.G, 2);
    const MatrixXcd QLQR =
        vertexq::qr_bax(basis, mp2, cplx(-u, 0.0), tau).matrix.adjoint() * GH2 *
        vertexq::qr_bax(basis, mp2, cplx(v, 0.0), tau).matrix;
    std::vector<std::vector<MatrixXcd>> Wm(d, std::vector<MatrixXcd>(d));
    for (int j = 1; j <= d; ++j)
      for (int i = 1; i <= d; ++i)
        Wm[j - 1][i - 1] =
            vertexq::w_matrix_bax(basis, mp2, tau, j, i, cplx(u, 0.0), cplx(v, 0.0));
    (void)r;
    MatrixXcd want(d * d, d * d);
    for (int ja = 1; ja <= d; ++ja)
      for (int jb = 1; jb <= d; ++jb)
        for (int ia = 1; ia <= d; ++ia)
          for (int ib = 1; ib <= d; ++ib)
            want((ja - 1) * d + (jb - 1), (ia - 1) * d + (ib - 1)) =
                (Wm[ja - 1][ia - 1] * Wm[jb - 1][ib - 1]).trace();
    CHECK(mat_rel(QLQR, want) < 1e-7);
  }
}

TEST_CASE("quasi-periodicity reports") {
  ThetaEngine eng{ThetaParams{}};
  const ModelParams mp = make_mp(1.0, 3, 4, 1);
  const RepBasis basis = vertexq::build_basis(eng, mp.l, mp.eta(), 7);
  const MatrixXcd tau = vertexq::draw_tau_consts(basis.dim, mp.r, kSeed);
  const auto reports = vertexq::quasi_periodicity_bax(basis, mp, cplx(0.1, 0.0), tau);
  REQUIRE(reports.size() == 5);
  const char* ids[5] = {"baxter.quasi.s_u1", "baxter.quasi.s_u3", "baxter.quasi.qr_u1",
                        "baxter.quasi.qr_u3", "baxter.quasi.qr_period"};
  for (int k = 0; k < 5; ++k) {
    CAPTURE(reports[k].id);
    CHECK(reports[k].id == ids[k]);
    CHECK(reports[k].tolerance == 1e-7);
    CHECK(reports[k].residual < reports[k].tolerance);
    CHECK(reports[k].pass);
  }

  CHECK(vertexq::bax_quasi_d(4, 2, 1) == 1);
  CHECK(vertexq::bax_quasi_d(4, 3, 2) == 2);
  CHECK(vertexq::bax_quasi_d(4, 4, 3) == 3);
  CHECK(vertexq::bax_quasi_d(4, 1, 1) == 0);
  CHECK(vertexq::bax_quasi_d(4, 4, 4) == 0);
  CHECK(vertexq::bax_quasi_d(4, 3, 4) == -3);
}

TEST_CASE("input guards") {
  ThetaEngine eng{ThetaParams{}};
  const ModelParams mp = make_mp(1.0, 3, 4, 1);
  const RepBasis basis = vertexq::build_basis(eng, mp.l, mp.eta(), 7);
  const MatrixXcd tau = vertexq::draw_tau_consts(basis.dim, mp.r, kSeed);

  ModelParams big = make_mp(1.0, 12, 4, 1);
  CHECK_THROWS_AS(vertexq::qr_bax(basis, big, cplx(0.1, 0.0), tau), std::length_error);
  CHECK_THROWS_AS(vertexq::null_vector_f(basis, 0, cplx(0.5, 0.0), cplx(0.1, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(vertexq::wF_wG_tables(4, 3, 2, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(vertexq::bax_branch(4, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(vertexq::build_S_bax(basis, mp, cplx(0.1, 0.0), tau.topRows(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(vertexq::w_matrix_bax(basis, mp, tau, 0, 1, cplx(0.1, 0.0), cplx(0.2, 0.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(vertexq::bax_t_chain(eng, mp, cplx(0.1, 0.0), cplx(0.2, 0.0), 0.0, 1.0),
                  std::invalid_argument);
}
