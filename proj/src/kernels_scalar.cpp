// Reference kernel: plain scalar complex arithmetic, one point at a time.
// The SIMD variants must reproduce this bit of math to ~1e-13 relative.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vertexq/kernels.hpp"

namespace vertexq::kernels {

ThetaTables make_tables(cplx tau, int n_max) {
  if (tau.imag() <= 0.0) throw std::domain_error("theta: Im tau must be positive");
  if (n_max < 2) throw std::domain_error("theta: n_max too small");
  const cplx ipi(0.0, std::numbers::pi);
  const cplx q = std::exp(ipi * tau);  // |q| < 1
  ThetaTables tb;
  tb.n_max = n_max;
  tb.q4 = std::exp(ipi * tau / 4.0);
  tb.t0.resize(n_max);
  tb.t1_up.resize(n_max - 1);
  tb.t1_dn.resize(n_max);
  cplx q2k = 1.0;  // q^(2k-2) entering iteration k
  for (int k = 1; k <= n_max; ++k) {
    tb.t1_dn[k - 1] = q2k;        // q^(2k-2)
    tb.t0[k - 1] = q2k * q;       // q^(2k-1)
    q2k *= q * q;                 // q^(2k)
    if (k <= n_max - 1) tb.t1_up[k - 1] = q2k;
  }
  return tb;
}

void batch_scalar(const ThetaTables& tb, int a, const cplx* w, std::size_t n,
                  cplx* out, double* tail) {
  const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
  for (std::size_t p = 0; p < n; ++p) {
    cplx acc, tu, td;
    cplx e, einv;
    if (a == 0) {
      e = std::exp(two_pi_i * w[p]);
      einv = 1.0 / e;
      tu = td = acc = 1.0;  // term at m = 0
      for (int k = 1; k <= tb.n_max; ++k) {
        tu *= tb.t0[k - 1] * e;
        td *= tb.t0[k - 1] * einv;
        acc += tu + td;
      }
    } else {
      const cplx half = std::exp(0.5 * two_pi_i * w[p]);  // exp(pi i w)
      e = half * half;
      einv = 1.0 / e;
      tu = td = acc = tb.q4 * half;  // term at m = 1/2
      for (int k = 1; k <= tb.n_max; ++k) {
        if (k < tb.n_max) {
          tu *= tb.t1_up[k - 1] * e;
          acc += tu;
        }
        td *= tb.t1_dn[k - 1] * einv;
        acc += td;
      }
    }
    out[p] = acc;
    tail[p] = std::max(std::abs(tu), std::abs(td));
  }
}

}  // namespace vertexq::kernels
