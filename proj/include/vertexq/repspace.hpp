// The finite-dimensional function space carrying the spin-l action: even
// theta functions of order 4l (dimension 2l+1), realized through a randomized
// product basis and collocation. The hermitian pairing is a doubly periodic
// cell integral evaluated by the periodic trapezoid rule with a doubling
// certificate.
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

#include "vertexq/params.hpp"
#include "vertexq/theta.hpp"

namespace vertexq {

// An operator on (or map into) one site space, in collocation coordinates.
using SiteMap = Eigen::MatrixXcd;

// A concrete element of the space: an evaluator plus, when the element is
// exactly [z;a]_{2l}, its parameter (this unlocks closed-form pairings).
struct ThetaVector {
  std::function<cplx(cplx)> eval;
  std::optional<cplx> sym_param;
};

class RepBasis {
 public:
  int dim = 0;  // 2l+1
  double l = 0.0;
  double eta = 0.0;
  const ThetaEngine* eng = nullptr;
  std::vector<cplx> offsets;  // basis vector j is [z; a_j]_{2l}
  std::vector<cplx> nodes;    // collocation points, kept away from zeros of [2z]
  Eigen::MatrixXcd E;         // E(i,j) = g_j(node_i)
  double cond = 0.0;
  int attempts = 0;

  ThetaVector g(int j) const;
  ThetaVector bracket_vector(cplx a) const;  // [z;a]_{2l} in this space
  Eigen::VectorXcd to_coeffs(const ThetaVector& f) const;
  ThetaVector from_coeffs(Eigen::VectorXcd c) const;

 private:
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  friend RepBasis build_basis(const ThetaEngine&, double, double, unsigned long long);
};

// Draws basis offsets and collocation nodes until the collocation matrix is
// well conditioned (cond < 1e8, at most 32 attempts, deterministic in seed).
RepBasis build_basis(const ThetaEngine& eng, double l, double eta, unsigned long long seed);

// (S^a f)(z) = [s_a(z - l eta) f(z+eta) - s_a(-z - l eta) f(z-eta)] / [2z]
ThetaVector apply_generator(const ThetaEngine& eng, double l, double eta, int a,
                            const ThetaVector& f);
SiteMap sklyanin_generator(const RepBasis& basis, int a);

// U_1 f = e^{pi i l} f(z+1/2); U_3 f = e^{pi i l} e^{pi i l (4z+tau)} f(z+tau/2);
// U_2 = U_3 U_1.
ThetaVector apply_unitary(const ThetaEngine& eng, double l, int a, const ThetaVector& f);
SiteMap unitary_U(const RepBasis& basis, int a);

struct QuadResult {
  cplx value;
  double certificate = 0.0;  // relative change at the final doubling
  int n_used = 0;
  bool shifted = false;  // grid moved half a step off a weight pole
};

// <f,g> = int_0^1 dx int_0^{Im tau} dy conj(f(z)) g(z) mu(z, conj z), z = x+iy.
// Doubles the grid until the certificate drops below 1e-8.
QuadResult sklyanin_form(const ThetaEngine& eng, double l, double eta, const ThetaVector& f,
                         const ThetaVector& g, int quad_n);

struct GramResult {
  Eigen::MatrixXcd G;
  double certificate = 0.0;
  int n_used = 0;
  bool shifted = false;
};
GramResult gram_matrix(const RepBasis& basis, int quad_n);

// <[z;alpha]_{2l}, [z;gamma]_{2l}> in closed form.
cplx sklyanin_form_closed(const ThetaEngine& eng, double l, double eta, cplx alpha, cplx gamma);

// Pairing weight mu(z,w): [2z][2w] / prod_{j=0}^{2l+1} th00(z+w+(2j-2l-1)eta) th00(z-w+(2j-2l-1)eta).
cplx pair_weight(const ThetaEngine& eng, double l, double eta, cplx z, cplx w);

}  // namespace vertexq
