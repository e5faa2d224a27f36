#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace lcc {

bool is_prime(std::uint32_t q);

/// Arithmetic modulo a prime q, 2 <= q <= 2^16. Residues are plain
/// uint32_t values in [0, q); the field object carries the modulus.
class PrimeField {
 public:
  static constexpr std::uint32_t kMaxModulus = 1U << 16;

  /// Throws PreconditionError unless q is a prime in [2, 2^16].
  explicit PrimeField(std::uint32_t q);

  std::uint32_t modulus() const { return q_; }

  std::uint32_t reduce(std::int64_t v) const {
    const std::int64_t r = v % static_cast<std::int64_t>(q_);
    return static_cast<std::uint32_t>(r < 0 ? r + q_ : r);
  }
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % q_; }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return (a + q_ - b) % q_; }
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : q_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    return static_cast<std::uint32_t>((static_cast<std::uint64_t>(a) * b) % q_);
  }
  /// Throws std::domain_error on zero.
  std::uint32_t inv(std::uint32_t a) const;

  /// dst += c * src, elementwise.
  void axpy(std::span<std::uint32_t> dst, std::uint32_t c, std::span<const std::uint32_t> src) const;

 private:
  std::uint32_t q_;
};

/// A residue tagged with its modulus. Mixing moduli throws.
class FqElement {
 public:
  FqElement(std::uint32_t value, std::uint32_t q);

  std::uint32_t value() const { return value_; }
  std::uint32_t modulus() const { return q_; }

  FqElement inv() const;

  friend FqElement operator+(FqElement a, FqElement b);
  friend FqElement operator-(FqElement a, FqElement b);
  friend FqElement operator*(FqElement a, FqElement b);
  friend FqElement operator-(FqElement a);
  friend bool operator==(FqElement a, FqElement b) = default;

 private:
  std::uint32_t value_;
  std::uint32_t q_;
};

/// Number of nonzero coordinates.
std::size_t fq_weight(std::span<const std::uint32_t> v);

}  // namespace lcc
