#include <arm_neon.h>

#include <bit>

#include "lcc/simd/bitops.hpp"

namespace lcc::simd::neon {
namespace {

constexpr std::size_t kLanes = 2;  // 64-bit words per uint64x2_t

inline std::size_t popcount_vec(uint64x2_t v) {
  return static_cast<std::size_t>(vaddvq_u8(vcntq_u8(vreinterpretq_u8_u64(v))));
}

inline bool vec_zero(uint64x2_t v) { return (vgetq_lane_u64(v, 0) | vgetq_lane_u64(v, 1)) == 0; }

void xor_into(Word* dst, const Word* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_u64(dst + i, veorq_u64(vld1q_u64(dst + i), vld1q_u64(src + i)));
  for (; i < n; ++i) dst[i] ^= src[i];
}

void xor_to(Word* dst, const Word* a, const Word* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) vst1q_u64(dst + i, veorq_u64(vld1q_u64(a + i), vld1q_u64(b + i)));
  for (; i < n; ++i) dst[i] = a[i] ^ b[i];
}

std::size_t popcount(const Word* a, std::size_t n) {
  std::size_t total = 0;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) total += popcount_vec(vld1q_u64(a + i));
  for (; i < n; ++i) total += static_cast<std::size_t>(std::popcount(a[i]));
  return total;
}

std::size_t xor_popcount(const Word* a, const Word* b, std::size_t n) {
  std::size_t total = 0;
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) total += popcount_vec(veorq_u64(vld1q_u64(a + i), vld1q_u64(b + i)));
  for (; i < n; ++i) total += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
  return total;
}

bool is_zero(const Word* a, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    if (!vec_zero(vld1q_u64(a + i))) return false;
  for (; i < n; ++i)
    if (a[i] != 0) return false;
  return true;
}

bool equal(const Word* a, const Word* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    if (!vec_zero(veorq_u64(vld1q_u64(a + i), vld1q_u64(b + i)))) return false;
  for (; i < n; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

std::size_t lowest_set_bit(const Word* a, std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    if (!vec_zero(vld1q_u64(a + i))) break;
  for (; i < n; ++i)
    if (a[i] != 0) return i * 64 + static_cast<std::size_t>(std::countr_zero(a[i]));
  return kNoBit;
}

}  // namespace

const BitKernels& kernels() {
  static const BitKernels k{Isa::neon, xor_into, xor_to, popcount, xor_popcount, is_zero, equal, lowest_set_bit};
  return k;
}

}  // namespace lcc::simd::neon
