#include <atomic>
#include <cstdlib>
#include <cstring>

#include "qmcwav/errors.hpp"
#include "qmcwav/simd.hpp"

namespace qmcwav::simd {

#if defined(QMCWAV_HAVE_AVX2)
const Kernels& avx2_kernels_impl();
#endif

const Kernels* avx2_kernels() {
#if defined(QMCWAV_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? &avx2_kernels_impl() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const Kernels* initial() {
  const char* env = std::getenv("QMCWAV_SIMD");
  if (env && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
  if (const Kernels* k = avx2_kernels()) return k;
  return &scalar_kernels();
}

std::atomic<const Kernels*>& current() {
  static std::atomic<const Kernels*> k{initial()};
  return k;
}

}  // namespace

const Kernels& active() { return *current().load(std::memory_order_relaxed); }

void select(const std::string& name) {
  if (name == "scalar") {
    current().store(&scalar_kernels());
  } else if (name == "avx2") {
    const Kernels* k = avx2_kernels();
    if (!k) throw ValidationError("simd: avx2 kernels unavailable");
    current().store(k);
  } else {
    throw ValidationError("simd: unknown kernel set '" + name + "'");
  }
}

}  // namespace qmcwav::simd
