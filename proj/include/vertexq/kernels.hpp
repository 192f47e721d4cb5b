// Batched summation of the theta series behind ThetaEngine. One scalar
// reference kernel plus SIMD variants built from intrinsics; the active one
// is chosen once per process from CPU capabilities and can be forced with
// VERTEXQ_KERNEL=scalar|avx2|neon.
#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace vertexq {
using cplx = std::complex<double>;
}

namespace vertexq::kernels {

// Per-modulus data consumed by the two-sided term recurrence
//   term(m+1) = term(m) * Q^(2m+1) * exp(+2 pi i w)
//   term(m-1) = term(m) * Q^(1-2m) * exp(-2 pi i w)
// with Q = exp(pi i tau), m = n + a/2, w = z + b/2. Only the Q powers are
// stored; the w-dependent factors are applied per point, so the hot loop is
// free of transcendentals.
struct ThetaTables {
  int n_max = 0;
  cplx q4;                  // exp(pi i tau / 4), seed of the a=1 ladder
  std::vector<cplx> t0;     // a=0: Q^(2k-1), k = 1..n_max, both directions
  std::vector<cplx> t1_up;  // a=1: Q^(2k),   k = 1..n_max-1
  std::vector<cplx> t1_dn;  // a=1: Q^(2k-2), k = 1..n_max
};

ThetaTables make_tables(cplx tau, int n_max);

// Sums the series at the shifted points w = z + b/2. out[i] receives the sum,
// tail[i] the magnitude of the last term taken in either direction (used by
// the engine to certify the truncation).
using BatchFn = void (*)(const ThetaTables&, int a, const cplx* w, std::size_t n,
                         cplx* out, double* tail);

void batch_scalar(const ThetaTables&, int a, const cplx* w, std::size_t n, cplx* out, double* tail);
void batch_avx2(const ThetaTables&, int a, const cplx* w, std::size_t n, cplx* out, double* tail);
void batch_neon(const ThetaTables&, int a, const cplx* w, std::size_t n, cplx* out, double* tail);

// Compiled in this build and usable on this CPU.
bool have_avx2();
bool have_neon();

BatchFn active();
const char* active_name();

}  // namespace vertexq::kernels
