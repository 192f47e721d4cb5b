// Theta functions with characteristics a,b in {0,1} at a fixed modulus, and
// the bracket/product vocabulary built on them. [z] denotes theta_11(z); all
// other helpers are finite products of theta values.
#pragma once

#include <complex>
#include <span>

#include "vertexq/kernels.hpp"

namespace vertexq {

struct ThetaParams {
  cplx tau{0.0, 1.0};
  int n_max = 30;
  double tol = 1e-12;
};

class ThetaEngine {
 public:
  explicit ThetaEngine(const ThetaParams& p);

  // theta_ab(z) = sum_n exp(pi i (n+a/2)^2 tau + 2 pi i (n+a/2)(z+b/2)).
  // Throws std::domain_error when |Im z| > 4 Im tau; values are certified
  // against the configured tolerance for |Im z| <= 2 Im tau.
  cplx theta(int a, int b, cplx z) const;
  void theta(int a, int b, std::span<const cplx> z, std::span<cplx> out) const;

  cplx bracket(cplx z) const;                                 // [z]
  cplx bracket_run(cplx z, int k, double eta) const;          // [z]_k
  cplx bracket_sym(cplx z, cplx a, int k, double eta) const;  // [z;a]_k

  // prod_{j=0}^{2l-1} theta_00(u + (2j-2l+1) eta); 2l must be a positive integer.
  cplx theta_pow2l(double l, double eta, cplx u) const;

  // Normalization constant of the n-fold product pairing:
  //   -2 eta e^{3 pi i tau/4} / ([2(n+1)eta] prod_{j>=1}(1-e^{2 pi i j tau})^3)
  cplx pairing_const(int n, double eta) const;

  // Closed-form pairing factors: cap_G is the plain 2l-fold product above,
  // cap_F carries the normalization pairing_const(2l) e^{-pi i tau}.
  cplx cap_F(double l, double eta, cplx z) const;
  cplx cap_G(double l, double eta, cplx z) const;

  // Vertex weight ratios W_a; the left family divides theta values at u by
  // the same theta at eta, the right family is the left one shifted by eta.
  cplx coeff_WL(int a, cplx u, double eta) const;
  cplx coeff_WR(int a, cplx u, double eta) const;

  const ThetaParams& params() const { return par_; }

 private:
  ThetaParams par_;
  kernels::ThetaTables tables_;
};

}  // namespace vertexq
