// Two-site R-matrix, L-operators, and the N-site transfer matrix on the
// chain H = V_N x ... x V_1 (site 1 is the rightmost, fastest tensor index).
#pragma once

#include <Eigen/Dense>

#include <array>

#include "vertexq/params.hpp"
#include "vertexq/repspace.hpp"

namespace vertexq {

// R(u) on C^2 x C^2, held in both of its equivalent forms. Construction
// fails if the forms drift apart, so `agreement` is diagnostic output.
struct TwoSiteR {
  Eigen::Matrix4cd sum_form;       // sum_a W_a^R(u) sigma^a x sigma^a
  Eigen::Matrix4cd explicit_form;  // a,b,c,d layout at transformed modulus
  double agreement = 0.0;          // relative deviation between the forms
};

// A dense operator on the full chain.
struct BigOp {
  Eigen::MatrixXcd matrix;
  const ModelParams* params = nullptr;
};

const Eigen::Matrix2cd& pauli(int a);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
Eigen::MatrixXcd tensor_power(const Eigen::MatrixXcd& a, int n);

TwoSiteR r_matrix(const ThetaEngine& eng, cplx u, const ModelParams& mp);

// Auxiliary-space blocks of L(u): blocks[i][j] = sum_a W_a^L(u) (sigma^a)_{ij} rho(S^a),
// indices ordered (-,+).
std::array<std::array<SiteMap, 2>, 2> l_blocks(const ThetaEngine& eng, const RepBasis& basis,
                                               cplx u);

// Full 2(2l+1) matrix with the auxiliary index outermost:
// [[L^-_-, L^-_+], [L^+_-, L^+_+]].
Eigen::MatrixXcd l_operator(const ThetaEngine& eng, const RepBasis& basis, cplx u);

// T(u) = tr_0 L_N(u) ... L_1(u), accumulated site by site over the
// auxiliary 2x2 structure.
BigOp transfer_matrix(const ThetaEngine& eng, const RepBasis& basis, cplx u,
                      const ModelParams& mp);

// h_-+(u) = (2 [u +- 2 l eta])^N, the scalar weights in the TQ relation.
cplx h_plus(const ThetaEngine& eng, cplx u, const ModelParams& mp);
cplx h_minus(const ThetaEngine& eng, cplx u, const ModelParams& mp);

}  // namespace vertexq
