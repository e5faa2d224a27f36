#pragma once

// Word-level GF(2) kernels.
//
// Every kernel has a scalar reference implementation; vectorized variants
// (AVX2 on x86-64, NEON on AArch64) are compiled in separate translation
// units and picked at runtime. All variants must return bit-identical
// results; tests/test_bitops_equivalence.cpp enforces this.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace lcc::simd {

using Word = std::uint64_t;

inline constexpr std::size_t kNoBit = static_cast<std::size_t>(-1);

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

struct BitKernels {
  Isa isa;
  // dst[i] ^= src[i]
  void (*xor_into)(Word* dst, const Word* src, std::size_t n);
  // dst[i] = a[i] ^ b[i]
  void (*xor_to)(Word* dst, const Word* a, const Word* b, std::size_t n);
  std::size_t (*popcount)(const Word* a, std::size_t n);
  // popcount(a ^ b)
  std::size_t (*xor_popcount)(const Word* a, const Word* b, std::size_t n);
  bool (*is_zero)(const Word* a, std::size_t n);
  bool (*equal)(const Word* a, const Word* b, std::size_t n);
  // Index of the lowest set bit, or kNoBit.
  std::size_t (*lowest_set_bit)(const Word* a, std::size_t n);
};

const BitKernels& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks support.
const BitKernels* avx2_kernels();
const BitKernels* neon_kernels();

// Best variant for this machine unless overridden. The environment variable
// LCC_FORCE_SCALAR=1 pins the scalar path at first use.
const BitKernels& active_kernels();

// Returns false if the requested variant is unavailable.
bool force_isa(Isa isa);
void reset_isa();

}  // namespace lcc::simd
