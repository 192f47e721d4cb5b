// Q_R built from a two-parameter gauge family: the 2x2 gauge matrices, the
// pseudo-vacuum vectors they degenerate on, the cyclic tridiagonal grid of
// site maps on an even chain, and the W/Y exchange machinery for this grid.
#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "vertexq/lattice.hpp"
#include "vertexq/report.hpp"

namespace vertexq {

// columns [-th00((lambda-v)/2), -th00((lambda+v)/2); th01(...), th01(...)]
// at half the modulus; periodic in lambda with period 4 r l eta.
struct GaugeM {
  cplx lambda{0.0, 0.0};
  cplx v{0.0, 0.0};
  Eigen::Matrix2cd matrix;
};

GaugeM gauge_m(const ThetaEngine& eng, cplx lambda, cplx v);

// omega_lambda(u; v) = [z; (lambda+u-v)/2 + (1-l) eta]_{2l}.
ThetaVector omega_vector(const RepBasis& basis, cplx lambda, cplx u, cplx v);

// lambda_k = lambda0 + 4 k l eta, the gauge value of column k.
cplx fab_lambda(const ModelParams& mp, int k);

// Cyclic neighbor moves on the even grid of size 2r; branch +1 for the
// upward step, -1 for the downward one (mod 2r).
bool fab_transition_allowed(int two_r, int i2, int j2);
int fab_branch(int two_r, int i2, int j2);
std::vector<std::pair<int, int>> fab_transitions(int two_r);

// M_{lambda_row}(v)^{-1} L(u) M_{lambda_col}(v); gamma annihilates the
// pseudo-vacuum of the matching branch.
struct TwistedGaugeL {
  SiteMap alpha, beta, gamma, delta;
};
TwistedGaugeL twisted_gauge_l(const RepBasis& basis, cplx u, cplx v, cplx lambda_row,
                              cplx lambda_col);

struct FabS {
  int two_r = 0;
  // grid[i2-1][j2-1]; cyclic tridiagonal, each nonzero entry rank one with
  // k-th column tau_consts(k, j2-1) * coeffs(omega of the branch).
  std::vector<std::vector<SiteMap>> grid;
  Eigen::MatrixXcd tau_consts;  // dim x 2r
};

FabS build_S_fab(const RepBasis& basis, const ModelParams& mp, cplx u,
                 const Eigen::MatrixXcd& tau_consts);

// Q_R(u) over the cyclic grid; the chain length must be even (the trace of
// an odd product of this grid shape vanishes identically).
BigOp qr_fab(const RepBasis& basis, const ModelParams& mp, cplx u,
             const Eigen::MatrixXcd& tau_consts);

// Shift data of the two-point function on the move (j2 -> j3, i2 -> i3):
// the first theta product takes (sigma_p u' + sigma u)/2 + mu1 l eta, the
// second (sigma_p u' - sigma u)/2 + mu2 l eta.
struct FabUMu {
  int sigma = 0;    // branch of the j-move
  int sigma_p = 0;  // branch of the i-move
  int mu1 = 0;      // sigma_p - sigma
  int mu2 = 0;      // sigma_p + sigma
};
FabUMu u_mu_tables(int two_r, int j3, int i3, int j2, int i2);

// W(j,i|u,u') over pairs, rows (j3,i3), cols (j2,i2), flat (j-1)*2r+(i-1);
// entry = pairing of S^{j3}_{j2}(-conj(u)) e_j with S^{i3}_{i2}(u') e_i:
// conj(tau) tau * F(i Im + 2(i2-j2) l eta + u1/2 + mu1 l eta)
//             * G(Re + 2(i2+j2) l eta + u2/2 + mu2 l eta),
// Im/Re taken of lambda0 - v.
Eigen::MatrixXcd w_matrix_fab(const RepBasis& basis, const ModelParams& mp,
                              const Eigen::MatrixXcd& tau_consts, int j, int i, cplx u, cplx up);

// The two ratio families of the exchange system; A depends on i2+j2 only,
// B on i2-j2 only.
cplx fab_ratio_A(const ThetaEngine& eng, const ModelParams& mp, cplx u, cplx up, int i2, int j2);
cplx fab_ratio_B(const ThetaEngine& eng, const ModelParams& mp, cplx u, cplx up, int i2, int j2);

// Diagonal of Y with Y W(j,i|u,u') Y^{-1} = W(j,i|u',u), built by
// propagating the ratio recurrences over both parity sublattices from unit
// seeds and inverting. Requires lambda0 - v = 2 r'' l eta; the closure
// products are asserted, and a violation aborts with std::domain_error.
Eigen::VectorXcd y_conjugation_fab(const ThetaEngine& eng, const ModelParams& mp, cplx u,
                                   cplx up);

// Exponent datum of the shift u -> u+tau on one grid move, and the diagonal
// similarity that telescopes it along a cyclic chain: e^{2 pi i l d(i2,j2)} =
// a(j2)/a(i2) exactly when lambda0 - v = 2 r'' l eta.
cplx fab_quasi_d(const ModelParams& mp, int i2, int j2);
cplx fab_similarity_a(const ModelParams& mp, int k);

// Residuals of the shift relations for the cyclic grid and its trace.
std::vector<Report> quasi_periodicity_fab(const RepBasis& basis, const ModelParams& mp, cplx u,
                                          const Eigen::MatrixXcd& tau_consts);

}  // namespace vertexq
