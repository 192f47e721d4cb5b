// Kernel selection: resolved once per process so a run never mixes variants.

#include <cstdlib>
#include <string_view>

#include "vertexq/kernels.hpp"

namespace vertexq::kernels {

bool have_avx2() {
#if defined(VERTEXQ_BUILD_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool have_neon() {
#if defined(VERTEXQ_BUILD_NEON)
  return true;  // baseline on aarch64
#else
  return false;
#endif
}

#if !defined(VERTEXQ_BUILD_AVX2)
void batch_avx2(const ThetaTables&, int, const cplx*, std::size_t, cplx*, double*) {
  std::abort();  // not compiled for this target
}
#endif
#if !defined(VERTEXQ_BUILD_NEON)
void batch_neon(const ThetaTables&, int, const cplx*, std::size_t, cplx*, double*) {
  std::abort();  // not compiled for this target
}
#endif

namespace {

BatchFn resolve() {
  if (const char* e = std::getenv("VERTEXQ_KERNEL")) {
    const std::string_view v(e);
    if (v == "scalar") return &batch_scalar;
    if (v == "avx2" && have_avx2()) return &batch_avx2;
    if (v == "neon" && have_neon()) return &batch_neon;
    // unknown or unavailable: fall through to auto-detection
  }
  if (have_avx2()) return &batch_avx2;
  if (have_neon()) return &batch_neon;
  return &batch_scalar;
}

}  // namespace

BatchFn active() {
  static const BatchFn fn = resolve();
  return fn;
}

const char* active_name() {
  const BatchFn fn = active();
  if (fn == &batch_avx2) return "avx2";
  if (fn == &batch_neon) return "neon";
  return "scalar";
}

}  // namespace vertexq::kernels
