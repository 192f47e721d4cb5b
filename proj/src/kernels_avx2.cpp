// AVX2 kernel: two complex points per 256-bit register, interleaved re/im.
// Same two-sided recurrence as the scalar reference; per-point setup
// (the exponentials) stays scalar, the m-sweep is pure FMA arithmetic.

#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "vertexq/kernels.hpp"

namespace vertexq::kernels {

namespace {

// (a+bi)(c+di) on both lanes: fmaddsub gives (ac - bd, ad + bc).
inline __m256d cmul(__m256d x, __m256d y) {
  const __m256d xre = _mm256_movedup_pd(x);
  const __m256d xim = _mm256_permute_pd(x, 0xF);
  const __m256d ysw = _mm256_permute_pd(y, 0x5);
  return _mm256_fmaddsub_pd(xre, y, _mm256_mul_pd(xim, ysw));
}

inline __m256d broadcast(const cplx& c) {
  return _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(&c));
}

inline __m256d pack(cplx lo, cplx hi) {
  return _mm256_setr_pd(lo.real(), lo.imag(), hi.real(), hi.imag());
}

inline void tails(__m256d t, double* lo, double* hi) {
  alignas(32) double b[4];
  _mm256_store_pd(b, t);
  *lo = std::hypot(b[0], b[1]);
  *hi = std::hypot(b[2], b[3]);
}

}  // namespace

void batch_avx2(const ThetaTables& tb, int a, const cplx* w, std::size_t n,
                cplx* out, double* tail) {
  const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
  std::size_t p = 0;
  for (; p + 2 <= n; p += 2) {
    __m256d acc, tu, td, e, einv;
    if (a == 0) {
      const cplx e0 = std::exp(two_pi_i * w[p]), e1 = std::exp(two_pi_i * w[p + 1]);
      e = pack(e0, e1);
      einv = pack(1.0 / e0, 1.0 / e1);
      acc = tu = td = pack(1.0, 1.0);
      for (int k = 1; k <= tb.n_max; ++k) {
        const __m256d q = broadcast(tb.t0[k - 1]);
        tu = cmul(tu, cmul(q, e));
        td = cmul(td, cmul(q, einv));
        acc = _mm256_add_pd(acc, _mm256_add_pd(tu, td));
      }
    } else {
      const cplx h0 = std::exp(0.5 * two_pi_i * w[p]), h1 = std::exp(0.5 * two_pi_i * w[p + 1]);
      const cplx e0 = h0 * h0, e1 = h1 * h1;
      e = pack(e0, e1);
      einv = pack(1.0 / e0, 1.0 / e1);
      acc = tu = td = pack(tb.q4 * h0, tb.q4 * h1);
      for (int k = 1; k <= tb.n_max; ++k) {
        if (k < tb.n_max) {
          tu = cmul(tu, cmul(broadcast(tb.t1_up[k - 1]), e));
          acc = _mm256_add_pd(acc, tu);
        }
        td = cmul(td, cmul(broadcast(tb.t1_dn[k - 1]), einv));
        acc = _mm256_add_pd(acc, td);
      }
    }
    alignas(32) double ob[4];
    _mm256_store_pd(ob, acc);
    out[p] = {ob[0], ob[1]};
    out[p + 1] = {ob[2], ob[3]};
    double u0, u1, d0, d1;
    tails(tu, &u0, &u1);
    tails(td, &d0, &d1);
    tail[p] = std::max(u0, d0);
    tail[p + 1] = std::max(u1, d1);
  }
  if (p < n) batch_scalar(tb, a, w + p, n - p, out + p, tail + p);
}

}  // namespace vertexq::kernels
