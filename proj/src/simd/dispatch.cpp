#include <atomic>
#include <cstdlib>
#include <cstring>

#include "lcc/simd/bitops.hpp"

namespace lcc::simd {

#if defined(LCC_BUILD_AVX2)
namespace avx2 {
const BitKernels& kernels();
}
#endif
#if defined(LCC_BUILD_NEON)
namespace neon {
const BitKernels& kernels();
}
#endif

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

const BitKernels* avx2_kernels() {
#if defined(LCC_BUILD_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
  return supported ? &avx2::kernels() : nullptr;
#else
  return nullptr;
#endif
}

const BitKernels* neon_kernels() {
#if defined(LCC_BUILD_NEON)
  // Advanced SIMD is mandatory on AArch64.
  return &neon::kernels();
#else
  return nullptr;
#endif
}

namespace {

const BitKernels* best_available() {
  if (const char* env = std::getenv("LCC_FORCE_SCALAR"); env != nullptr && std::strcmp(env, "1") == 0)
    return &scalar_kernels();
  if (const BitKernels* k = avx2_kernels()) return k;
  if (const BitKernels* k = neon_kernels()) return k;
  return &scalar_kernels();
}

std::atomic<const BitKernels*>& active_slot() {
  static std::atomic<const BitKernels*> slot{best_available()};
  return slot;
}

}  // namespace

const BitKernels& active_kernels() { return *active_slot().load(std::memory_order_relaxed); }

bool force_isa(Isa isa) {
  const BitKernels* k = nullptr;
  switch (isa) {
    case Isa::scalar: k = &scalar_kernels(); break;
    case Isa::avx2: k = avx2_kernels(); break;
    case Isa::neon: k = neon_kernels(); break;
  }
  if (k == nullptr) return false;
  active_slot().store(k, std::memory_order_relaxed);
  return true;
}

void reset_isa() { active_slot().store(best_available(), std::memory_order_relaxed); }

}  // namespace lcc::simd
