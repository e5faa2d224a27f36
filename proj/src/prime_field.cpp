#include "lcc/prime_field.hpp"

#include <stdexcept>
#include <string>

#include "lcc/errors.hpp"

namespace lcc {

bool is_prime(std::uint32_t q) {
  if (q < 2) return false;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
  if (q < 2 || q > kMaxModulus || !is_prime(q))
    throw PreconditionError("field modulus must be a prime in [2, 65536], got " + std::to_string(q));
}

std::uint32_t PrimeField::inv(std::uint32_t a) const {
  a %= q_;
  if (a == 0) throw std::domain_error("inverse of zero in F_" + std::to_string(q_));
  // Extended Euclid on (a, q).
  std::int64_t r0 = q_, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t quot = r0 / r1;
    std::int64_t t = r0 - quot * r1;
    r0 = r1;
    r1 = t;
    t = s0 - quot * s1;
    s0 = s1;
    s1 = t;
  }
  return reduce(s0);
}

void PrimeField::axpy(std::span<std::uint32_t> dst, std::uint32_t c, std::span<const std::uint32_t> src) const {
  if (dst.size() != src.size()) throw PreconditionError("axpy length mismatch");
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = add(dst[i], mul(c, src[i]));
}

FqElement::FqElement(std::uint32_t value, std::uint32_t q) : value_(value), q_(q) {
  if (q < 2 || q > PrimeField::kMaxModulus || !is_prime(q)) throw PreconditionError("FqElement modulus must be prime");
  if (value >= q) throw PreconditionError("FqElement value out of range");
}

namespace {
void same_field(FqElement a, FqElement b) {
  if (a.modulus() != b.modulus()) throw PreconditionError("FqElement operands from different fields");
}
}  // namespace

FqElement FqElement::inv() const { return {PrimeField(q_).inv(value_), q_}; }

FqElement operator+(FqElement a, FqElement b) {
  same_field(a, b);
  return {(a.value_ + b.value_) % a.q_, a.q_};
}

FqElement operator-(FqElement a, FqElement b) {
  same_field(a, b);
  return {(a.value_ + a.q_ - b.value_) % a.q_, a.q_};
}

FqElement operator*(FqElement a, FqElement b) {
  same_field(a, b);
  return {static_cast<std::uint32_t>((static_cast<std::uint64_t>(a.value_) * b.value_) % a.q_), a.q_};
}

FqElement operator-(FqElement a) { return {a.value_ == 0 ? 0 : a.q_ - a.value_, a.q_}; }

std::size_t fq_weight(std::span<const std::uint32_t> v) {
  std::size_t w = 0;
  for (std::uint32_t c : v)
    if (c != 0) ++w;
  return w;
}

}  // namespace lcc
