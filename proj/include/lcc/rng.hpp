#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace lcc {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of sub-stream `stream` under `parent`. Every random sub-operation
/// takes its seed this way, so each can be replayed in isolation.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) {
  return splitmix64(parent ^ splitmix64(stream));
}

/// Stream labels used across the library.
namespace stream {
inline constexpr std::uint64_t kPartition = 1;
inline constexpr std::uint64_t kDrops = 2;
inline constexpr std::uint64_t kRound = 3;
inline constexpr std::uint64_t kSample = 4;
inline constexpr std::uint64_t kPacking = 5;
inline constexpr std::uint64_t kCoupling = 6;
inline constexpr std::uint64_t kPart = 7;
inline constexpr std::uint64_t kRow = 8;
}  // namespace stream

/// std::mt19937_64 (its output sequence is fixed by the standard) with
/// bounded draws and shuffles implemented here, because the algorithms
/// behind std::uniform_int_distribution and std::shuffle vary between
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound); bound > 0. Rejection sampling on the top range.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Fisher-Yates, highest index first.
  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = below(i);
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lcc
