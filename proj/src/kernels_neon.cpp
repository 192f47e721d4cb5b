// NEON kernel: one complex point per 128-bit register, (re, im) lanes.
// Mirrors the scalar recurrence; built only on aarch64 targets.

#include <arm_neon.h>

#include <cmath>
#include <numbers>

#include "vertexq/kernels.hpp"

namespace vertexq::kernels {

namespace {

const float64x2_t kSign = {-1.0, 1.0};

inline float64x2_t load(const cplx& c) {
  return vld1q_f64(reinterpret_cast<const double*>(&c));
}

// (a+bi)(c+di) = (ac, ad) + (-1, 1)*(bd, bc)
inline float64x2_t cmul(float64x2_t x, float64x2_t y) {
  const float64x2_t t = vmulq_laneq_f64(y, x, 0);
  const float64x2_t s = vmulq_laneq_f64(vextq_f64(y, y, 1), x, 1);
  return vfmaq_f64(t, s, kSign);
}

inline double mag(float64x2_t v) {
  return std::hypot(vgetq_lane_f64(v, 0), vgetq_lane_f64(v, 1));
}

}  // namespace

void batch_neon(const ThetaTables& tb, int a, const cplx* w, std::size_t n,
                cplx* out, double* tail) {
  const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
  for (std::size_t p = 0; p < n; ++p) {
    float64x2_t acc, tu, td, e, einv;
    if (a == 0) {
      const cplx e0 = std::exp(two_pi_i * w[p]);
      e = load(e0);
      einv = load(1.0 / e0);
      acc = tu = td = float64x2_t{1.0, 0.0};
      for (int k = 1; k <= tb.n_max; ++k) {
        const float64x2_t q = load(tb.t0[k - 1]);
        tu = cmul(tu, cmul(q, e));
        td = cmul(td, cmul(q, einv));
        acc = vaddq_f64(acc, vaddq_f64(tu, td));
      }
    } else {
      const cplx h = std::exp(0.5 * two_pi_i * w[p]);
      const cplx e0 = h * h;
      e = load(e0);
      einv = load(1.0 / e0);
      const cplx seed = tb.q4 * h;
      acc = tu = td = load(seed);
      for (int k = 1; k <= tb.n_max; ++k) {
        if (k < tb.n_max) {
          tu = cmul(tu, cmul(load(tb.t1_up[k - 1]), e));
          acc = vaddq_f64(acc, tu);
        }
        td = cmul(td, cmul(load(tb.t1_dn[k - 1]), einv));
        acc = vaddq_f64(acc, td);
      }
    }
    out[p] = {vgetq_lane_f64(acc, 0), vgetq_lane_f64(acc, 1)};
    tail[p] = std::max(mag(tu), mag(td));
  }
}

}  // namespace vertexq::kernels
