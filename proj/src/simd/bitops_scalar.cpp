#include "lcc/simd/bitops.hpp"

#include <bit>

namespace lcc::simd {
namespace {

void xor_into_scalar(Word* dst, const Word* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
}

void xor_to_scalar(Word* dst, const Word* a, const Word* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] ^ b[i];
}

std::size_t popcount_scalar(const Word* a, std::size_t n) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += static_cast<std::size_t>(std::popcount(a[i]));
  return total;
}

std::size_t xor_popcount_scalar(const Word* a, const Word* b, std::size_t n) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
  return total;
}

bool is_zero_scalar(const Word* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != 0) return false;
  return true;
}

bool equal_scalar(const Word* a, const Word* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

std::size_t lowest_set_bit_scalar(const Word* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (a[i] != 0) return i * 64 + static_cast<std::size_t>(std::countr_zero(a[i]));
  return kNoBit;
}

}  // namespace

const BitKernels& scalar_kernels() {
  static const BitKernels k{Isa::scalar,         xor_into_scalar, xor_to_scalar,
                            popcount_scalar,     xor_popcount_scalar,
                            is_zero_scalar,      equal_scalar,
                            lowest_set_bit_scalar};
  return k;
}

}  // namespace lcc::simd
