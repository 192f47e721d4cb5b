// Q_R built from a gauge-degenerate monodromy: gauge slope values p, the
// null vectors f_± they create, the sparse r-by-r grid of site maps S, the
// traced product Q_R, and the W/Y exchange machinery that commutes two Q's.
#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "vertexq/lattice.hpp"
#include "vertexq/report.hpp"

namespace vertexq {

// p_k = -th00((2k-1) l eta, tau/2) / th01((2k-1) l eta, tau/2), k = 1..r.
// The same formula at k=0 and k=r+1 reproduces p_1 and p_r; the worst of the
// two mismatches is kept as boundary_residual.
struct PVector {
  Eigen::VectorXcd p;  // slot k-1 holds p_k
  double boundary_residual = 0.0;
};

PVector p_values(const ThetaEngine& eng, const ModelParams& mp);

// X_k = th01((2k-1) l eta, tau/2), the diagonal gauge normalizer.
Eigen::VectorXcd x_values(const ThetaEngine& eng, const ModelParams& mp);

// f_sign(lambda, u, z) = [z; (sign*lambda+u)/2 + (1-l) eta]_{2l}.
ThetaVector null_vector_f(const RepBasis& basis, int sign, cplx lambda, cplx u);

// lambda_k = 2 (2k-1) l eta, the grid value the k-th gauge column sits at.
cplx bax_lambda(const ModelParams& mp, int k);

// Grid moves allowed by the gauge degeneracy: up/down neighbors plus the two
// corners. branch is the sign of f used on an allowed move, d the extra
// quasi-period exponent of the move.
bool bax_transition_allowed(int r, int i2, int j2);
int bax_branch(int r, int i2, int j2);
int bax_quasi_d(int r, int i2, int j2);
std::vector<std::pair<int, int>> bax_transitions(int r);

// The four entries of Mtilde_{i''}^{-1} L(u) Mtilde_{j''} with upper
// triangular unimodular gauges Mtilde_k = [[1, p_k], [0, 1]], assembled from
// the auxiliary-space blocks of L.
struct TwistedL {
  SiteMap alpha, beta, gamma, delta;
};
TwistedL twisted_l_elements(const RepBasis& basis, const ModelParams& mp, cplx u, int i2, int j2);

struct BaxterS {
  int r = 0;
  // grid[i2-1][j2-1]; nonzero only on allowed transitions, each nonzero entry
  // is rank one with k-th column tau_consts(k, j2-1) * coeffs(f_branch).
  std::vector<std::vector<SiteMap>> grid;
  Eigen::MatrixXcd tau_consts;  // dim x r
};

// Generic column constants on the annulus 0.5 <= |tau_k,j| <= 2, deterministic
// in the seed. The same draw must be shared by every u entering one relation.
Eigen::MatrixXcd draw_tau_consts(int dim, int r, unsigned long long seed);

BaxterS build_S_bax(const RepBasis& basis, const ModelParams& mp, cplx u,
                    const Eigen::MatrixXcd& tau_consts);

// Q_R(u) = tr over the grid index of S_N(u) ... S_1(u), a (2l+1)^N-square
// matrix from the coefficient spaces of the sites into their product.
BigOp qr_bax(const RepBasis& basis, const ModelParams& mp, cplx u,
             const Eigen::MatrixXcd& tau_consts);

// Shift tables of the two-point function: on the move (j2 -> j3, i2 -> i3)
// the pairing of S-columns equals conj(tau_j,j2) tau_i,i2 *
// F((u+v)/2 + 2 wF l eta) * G((v-u)/2 + 2 wG l eta); returns (wF, wG).
std::pair<int, int> wF_wG_tables(int r, int j3, int i3, int j2, int i2);

// W(j,i|u,v) over pairs, rows (j3,i3), cols (j2,i2), flat index
// (j-1)*r + (i-1); entry = pairing of S^{j3}_{j2}(-conj(u)) e_j with
// S^{i3}_{i2}(v) e_i in closed form.
Eigen::MatrixXcd w_matrix_bax(const RepBasis& basis, const ModelParams& mp,
                              const Eigen::MatrixXcd& tau_consts, int j, int i, cplx u, cplx v);

// The chain t_m, m in [2-r, 2r] (slot m-(2-r)), from the two-term recurrence
// t_{m+2}/t_m = G((u-v)/2 + 2 m l eta) / G((v-u)/2 + 2 m l eta) seeded at
// t_1, t_2; the recurrence forces t_{m+1} = t_{-m+1}.
Eigen::VectorXcd bax_t_chain(const ThetaEngine& eng, const ModelParams& mp, cplx u, cplx v,
                             cplx t1 = 1.0, cplx t2 = 1.0);

// Diagonal of Y with Y W(j,i|u,v) Y^{-1} = W(j,i|v,u): y_(j2,i2) =
// t_{j2+i2} t_{-j2+i2+1}. The seeds only rescale Y and drop out of the
// conjugation.
Eigen::VectorXcd y_conjugation_bax(const ThetaEngine& eng, const ModelParams& mp, cplx u, cplx v,
                                   cplx t1 = 1.0, cplx t2 = 1.0);

// Residuals of the shift relations: per-entry S(u) -> S(u+1), S(u) -> S(u+tau)
// with the move-dependent exponent d, the traced versions for Q_R, and the
// exact period Q_R(u+2) = Q_R(u).
std::vector<Report> quasi_periodicity_bax(const RepBasis& basis, const ModelParams& mp, cplx u,
                                          const Eigen::MatrixXcd& tau_consts);

}  // namespace vertexq
