#include "vertexq/repspace.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace vertexq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFormTol = 1e-8;    // doubling certificate target
constexpr double kPoleGuard = 1e-10; // minimum |theta_00 factor| on a grid

int spin2(double l) {
  const int k = static_cast<int>(std::lround(2.0 * l));
  if (k < 1 || std::abs(2.0 * l - k) > 1e-12)
    throw std::invalid_argument("repspace: 2l must be a positive integer");
  return k;
}

struct Grid {
  std::vector<cplx> pts;
  double weight = 0.0;  // per-point measure
};

Grid make_grid(int n, double shift, double period_y) {
  Grid g;
  g.pts.reserve(static_cast<std::size_t>(n) * n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      g.pts.push_back({(k + shift) / n, (m + shift) * period_y / n});
  g.weight = period_y / (static_cast<double>(n) * n);
  return g;
}

// prod over the 2l factors of [z;a]_{2l}, batched across all points
Eigen::VectorXcd sym_on_grid(const ThetaEngine& eng, const std::vector<cplx>& pts, cplx a,
                             int k2l, double eta) {
  const std::size_t n = pts.size();
  Eigen::VectorXcd prod = Eigen::VectorXcd::Ones(n);
  std::vector<cplx> args(n), vals(n);
  for (int sgn : {+1, -1})
    for (int j = 0; j < k2l; ++j) {
      for (std::size_t i = 0; i < n; ++i)
        args[i] = static_cast<double>(sgn) * pts[i] + a + 2.0 * j * eta;
      eng.theta(1, 1, args, vals);
      for (std::size_t i = 0; i < n; ++i) prod(i) *= vals[i];
    }
  return prod;
}

// mu(z, conj z) on the grid; returns the weight values and the smallest
// |theta_00 factor| met in the denominator (pole guard).
std::pair<Eigen::VectorXcd, double> mu_on_grid(const ThetaEngine& eng, double l, double eta,
                                               const std::vector<cplx>& pts) {
  const int k2l = spin2(l);
  const std::size_t n = pts.size();
  std::vector<cplx> args(n), vals(n);

  Eigen::VectorXcd num = Eigen::VectorXcd::Ones(n);
  for (int sgn : {+1, -1}) {  // [2z] and [2 conj z]
    for (std::size_t i = 0; i < n; ++i)
      args[i] = 2.0 * (sgn > 0 ? pts[i] : std::conj(pts[i]));
    eng.theta(1, 1, args, vals);
    for (std::size_t i = 0; i < n; ++i) num(i) *= vals[i];
  }

  Eigen::VectorXcd den = Eigen::VectorXcd::Ones(n);
  double guard = 1e300;
  for (int j = 0; j <= k2l + 1; ++j) {
    const double c = (2.0 * j - k2l - 1.0) * eta;
    for (int diff : {0, 1}) {
      for (std::size_t i = 0; i < n; ++i) {
        const cplx z = pts[i], w = std::conj(pts[i]);
        args[i] = (diff ? z - w : z + w) + c;
      }
      eng.theta(0, 0, args, vals);
      for (std::size_t i = 0; i < n; ++i) {
        den(i) *= vals[i];
        guard = std::min(guard, std::abs(vals[i]));
      }
    }
  }
  return {num.cwiseQuotient(den), guard};
}

// picks shift 0, then 0.5 if a denominator factor collapses
std::pair<Grid, Eigen::VectorXcd> guarded_grid(const ThetaEngine& eng, double l, double eta,
                                               int n, bool* shifted) {
  const double period_y = eng.params().tau.imag();
  for (double shift : {0.0, 0.5}) {
    Grid grid = make_grid(n, shift, period_y);
    auto [mu, guard] = mu_on_grid(eng, l, eta, grid.pts);
    if (guard > kPoleGuard) {
      if (shifted) *shifted = (shift != 0.0);
      return {std::move(grid), std::move(mu)};
    }
  }
  throw std::runtime_error("sklyanin_form: pairing weight is singular on the quadrature grid");
}

}  // namespace

ThetaVector RepBasis::g(int j) const { return bracket_vector(offsets.at(j)); }

ThetaVector RepBasis::bracket_vector(cplx a) const {
  const ThetaEngine* e = eng;
  const int k2l = spin2(l);
  const double et = eta;
  return {[e, a, k2l, et](cplx z) { return e->bracket_sym(z, a, k2l, et); }, a};
}

Eigen::VectorXcd RepBasis::to_coeffs(const ThetaVector& f) const {
  Eigen::VectorXcd vals(dim);
  for (int i = 0; i < dim; ++i) vals(i) = f.eval(nodes[i]);
  return lu_.solve(vals);
}

ThetaVector RepBasis::from_coeffs(Eigen::VectorXcd c) const {
  const ThetaEngine* e = eng;
  const int k2l = spin2(l);
  const double et = eta;
  const std::vector<cplx> offs = offsets;
  return {[e, k2l, et, offs, c = std::move(c)](cplx z) {
            cplx acc = 0.0;
            for (int j = 0; j < static_cast<int>(offs.size()); ++j)
              acc += c(j) * e->bracket_sym(z, offs[j], k2l, et);
            return acc;
          },
          std::nullopt};
}

RepBasis build_basis(const ThetaEngine& eng, double l, double eta, unsigned long long seed) {
  const int k2l = spin2(l);
  const int dim = k2l + 1;
  const double line = eng.params().tau.imag() / 7.0;

  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> band(0.05, 0.45), unit(0.0, 1.0);

  RepBasis b;
  b.dim = dim;
  b.l = l;
  b.eta = eta;
  b.eng = &eng;

  for (int attempt = 1; attempt <= 32; ++attempt) {
    const double a0 = band(gen), step = band(gen);
    std::vector<cplx> offsets(dim), nodes(dim);
    for (int j = 0; j < dim; ++j) offsets[j] = a0 + j * step;
    bool nodes_ok = true;
    for (int i = 0; i < dim; ++i) {
      nodes[i] = {unit(gen), line};
      if (std::abs(eng.bracket(2.0 * nodes[i])) <= 1e-6) nodes_ok = false;
    }
    if (!nodes_ok) continue;

    Eigen::MatrixXcd E(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) E(i, j) = eng.bracket_sym(nodes[i], offsets[j], k2l, eta);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(E);
    const double cond = svd.singularValues()(0) / svd.singularValues()(dim - 1);
    if (!(cond < 1e8)) continue;

    b.offsets = std::move(offsets);
    b.nodes = std::move(nodes);
    b.E = std::move(E);
    b.cond = cond;
    b.attempts = attempt;
    b.lu_ = Eigen::PartialPivLU<Eigen::MatrixXcd>(b.E);
    return b;
  }
  throw std::runtime_error("build_basis: no well-conditioned draw in 32 attempts");
}

ThetaVector apply_generator(const ThetaEngine& eng, double l, double eta, int a,
                            const ThetaVector& f) {
  if (a < 0 || a > 3) throw std::invalid_argument("apply_generator: index out of range");
  static constexpr int kChar[4][2] = {{1, 1}, {1, 0}, {0, 0}, {0, 1}};
  const cplx scale = (a == 2 ? cplx(0.0, 1.0) : cplx(1.0, 0.0)) *
                     eng.theta(kChar[a][0], kChar[a][1], cplx(eta, 0.0));
  const ThetaEngine* e = &eng;
  const auto fe = f.eval;
  return {[e, a, l, eta, scale, fe](cplx z) {
            const cplx sp = scale * e->theta(kChar[a][0], kChar[a][1], 2.0 * (z - l * eta));
            const cplx sm = scale * e->theta(kChar[a][0], kChar[a][1], 2.0 * (-z - l * eta));
            return (sp * fe(z + eta) - sm * fe(z - eta)) / e->bracket(2.0 * z);
          },
          std::nullopt};
}

Eigen::MatrixXcd sklyanin_generator(const RepBasis& basis, int a) {
  Eigen::MatrixXcd M(basis.dim, basis.dim);
  for (int j = 0; j < basis.dim; ++j)
    M.col(j) = basis.to_coeffs(apply_generator(*basis.eng, basis.l, basis.eta, a, basis.g(j)));
  return M;
}

ThetaVector apply_unitary(const ThetaEngine& eng, double l, int a, const ThetaVector& f) {
  const ThetaEngine* e = &eng;
  const auto fe = f.eval;
  const cplx phase = std::exp(cplx(0.0, kPi * l));
  switch (a) {
    case 1:
      return {[phase, fe](cplx z) { return phase * fe(z + 0.5); }, std::nullopt};
    case 3: {
      const cplx tau = eng.params().tau;
      return {[phase, fe, l, tau](cplx z) {
                return phase * std::exp(cplx(0.0, kPi * l) * (4.0 * z + tau)) * fe(z + 0.5 * tau);
              },
              std::nullopt};
    }
    case 2:
      return apply_unitary(eng, l, 3, apply_unitary(eng, l, 1, f));
    default:
      throw std::invalid_argument("apply_unitary: index must be 1, 2 or 3");
  }
}

Eigen::MatrixXcd unitary_U(const RepBasis& basis, int a) {
  Eigen::MatrixXcd M(basis.dim, basis.dim);
  for (int j = 0; j < basis.dim; ++j)
    M.col(j) = basis.to_coeffs(apply_unitary(*basis.eng, basis.l, a, basis.g(j)));
  return M;
}

cplx pair_weight(const ThetaEngine& eng, double l, double eta, cplx z, cplx w) {
  const int k2l = spin2(l);
  cplx den = 1.0;
  for (int j = 0; j <= k2l + 1; ++j) {
    const double c = (2.0 * j - k2l - 1.0) * eta;
    den *= eng.theta(0, 0, z + w + c) * eng.theta(0, 0, z - w + c);
  }
  return eng.bracket(2.0 * z) * eng.bracket(2.0 * w) / den;
}

QuadResult sklyanin_form(const ThetaEngine& eng, double l, double eta, const ThetaVector& f,
                         const ThetaVector& g, int quad_n) {
  const int cap = std::max(256, 4 * quad_n);
  QuadResult res;
  cplx prev = 0.0;
  bool have_prev = false;
  for (int n = quad_n; n <= cap; n *= 2) {
    bool shifted = false;
    auto [grid, mu] = guarded_grid(eng, l, eta, n, &shifted);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < grid.pts.size(); ++i)
      acc += std::conj(f.eval(grid.pts[i])) * g.eval(grid.pts[i]) * mu(i);
    const cplx val = acc * grid.weight;
    if (have_prev) {
      const double cert = std::abs(val - prev) / std::max(1.0, std::abs(val));
      if (cert < kFormTol) return {val, cert, n, shifted};
    }
    prev = val;
    have_prev = true;
    res = {val, 1.0, n, shifted};
  }
  throw std::runtime_error("sklyanin_form: no convergence certificate up to n=" +
                           std::to_string(cap));
}

GramResult gram_matrix(const RepBasis& basis, int quad_n) {
  const ThetaEngine& eng = *basis.eng;
  const int k2l = spin2(basis.l);
  const int cap = std::max(256, 4 * quad_n);
  Eigen::MatrixXcd prev;
  for (int n = quad_n; n <= cap; n *= 2) {
    bool shifted = false;
    auto [grid, mu] = guarded_grid(eng, basis.l, basis.eta, n, &shifted);
    Eigen::MatrixXcd Egrid(grid.pts.size(), basis.dim);
    for (int j = 0; j < basis.dim; ++j)
      Egrid.col(j) = sym_on_grid(eng, grid.pts, basis.offsets[j], k2l, basis.eta);
    const Eigen::VectorXcd w = mu * grid.weight;
    Eigen::MatrixXcd G = Egrid.adjoint() * w.asDiagonal() * Egrid;
    if (prev.size() > 0) {
      const double cert = (G - prev).norm() / std::max(1.0, G.norm());
      if (cert < kFormTol) return {std::move(G), cert, n, shifted};
    }
    prev = std::move(G);
  }
  throw std::runtime_error("gram_matrix: no convergence certificate up to n=" +
                           std::to_string(cap));
}

cplx sklyanin_form_closed(const ThetaEngine& eng, double l, double eta, cplx alpha, cplx gamma) {
  const int k2l = spin2(l);
  const cplx ac = std::conj(alpha);
  return eng.cap_F(l, eta, gamma - ac) *
         eng.cap_G(l, eta, gamma + ac + (2.0 * k2l - 2.0) * eta);
}

}  // namespace vertexq
