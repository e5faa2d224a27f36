#include "lcc/bitrow.hpp"

#include <bit>
#include <cctype>

#include "lcc/errors.hpp"

namespace lcc {
namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower >= 'a' && lower <= 'f') return lower - 'a' + 10;
  return -1;
}

}  // namespace

BitRow BitRow::unit(std::size_t dim, std::size_t j) {
  if (j >= dim) throw PreconditionError("unit vector index out of range");
  BitRow r(dim);
  r.set(j);
  return r;
}

BitRow BitRow::from_indices(std::size_t dim, std::span<const std::uint32_t> indices) {
  BitRow r(dim);
  for (std::uint32_t j : indices) {
    if (j >= dim) throw PreconditionError("bit index out of range");
    r.flip(j);
  }
  return r;
}

BitRow BitRow::from_bits(std::string_view bits) {
  BitRow r(bits.size());
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j] == '1')
      r.set(j);
    else if (bits[j] != '0')
      throw ParseError("bit string may only contain '0' and '1'");
  }
  return r;
}

BitRow BitRow::from_hex(std::string_view hex, std::size_t dim) {
  const std::size_t bytes = (dim + 7) / 8;
  if (hex.size() != 2 * bytes)
    throw ParseError("hex row has " + std::to_string(hex.size()) + " digits, expected " + std::to_string(2 * bytes));
  BitRow r(dim);
  for (std::size_t b = 0; b < bytes; ++b) {
    const int hi = hex_value(hex[2 * b]);
    const int lo = hex_value(hex[2 * b + 1]);
    if (hi < 0 || lo < 0) throw ParseError("invalid hex digit in row");
    const auto byte = static_cast<Word>((hi << 4) | lo);
    r.words_[b / 8] |= byte << (8 * (b % 8));
  }
  if (dim % kWordBits != 0 && !r.words_.empty()) {
    const Word mask = (Word{1} << (dim % kWordBits)) - 1;
    if ((r.words_.back() & ~mask) != 0) throw ParseError("hex row sets bits beyond its dimension");
  }
  return r;
}

void BitRow::set(std::size_t j, bool value) {
  const Word bit = Word{1} << (j % kWordBits);
  if (value)
    words_[j / kWordBits] |= bit;
  else
    words_[j / kWordBits] &= ~bit;
}

void BitRow::clear() {
  for (Word& w : words_) w = 0;
}

BitRow& BitRow::operator^=(const BitRow& other) {
  if (other.dim_ != dim_) throw PreconditionError("xor of rows with different dimensions");
  simd::active_kernels().xor_into(words_.data(), other.words_.data(), words_.size());
  return *this;
}

void BitRow::xor_words(std::span<const Word> other) {
  if (other.size() != words_.size()) throw PreconditionError("xor of rows with different widths");
  simd::active_kernels().xor_into(words_.data(), other.data(), words_.size());
}

std::size_t BitRow::weight() const { return simd::active_kernels().popcount(words_.data(), words_.size()); }

bool BitRow::is_zero() const { return simd::active_kernels().is_zero(words_.data(), words_.size()); }

std::size_t BitRow::lowest_set_bit() const {
  return simd::active_kernels().lowest_set_bit(words_.data(), words_.size());
}

std::vector<std::uint32_t> BitRow::support() const {
  std::vector<std::uint32_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    Word bits = words_[w];
    while (bits != 0) {
      out.push_back(static_cast<std::uint32_t>(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits))));
      bits &= bits - 1;
    }
  }
  return out;
}

std::string BitRow::to_bits() const {
  std::string s(dim_, '0');
  for (std::size_t j = 0; j < dim_; ++j)
    if (get(j)) s[j] = '1';
  return s;
}

std::string BitRow::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t bytes = (dim_ + 7) / 8;
  std::string s;
  s.reserve(2 * bytes);
  for (std::size_t b = 0; b < bytes; ++b) {
    const auto byte = static_cast<unsigned>((words_[b / 8] >> (8 * (b % 8))) & 0xffU);
    s.push_back(kDigits[byte >> 4]);
    s.push_back(kDigits[byte & 0xfU]);
  }
  return s;
}

bool operator==(const BitRow& a, const BitRow& b) {
  return a.dim_ == b.dim_ && simd::active_kernels().equal(a.words_.data(), b.words_.data(), a.words_.size());
}

std::size_t hamming_distance(const BitRow& a, const BitRow& b) {
  if (a.dim() != b.dim()) throw PreconditionError("distance between rows of different dimensions");
  return simd::active_kernels().xor_popcount(a.words().data(), b.words().data(), a.word_count());
}

BitMatrix BitMatrix::from_rows(const std::vector<BitRow>& rows) {
  if (rows.empty()) return {};
  BitMatrix m(rows.size(), rows.front().dim());
  for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
  return m;
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

void BitMatrix::set(std::size_t i, std::size_t j, bool value) {
  const Word bit = Word{1} << (j % kWordBits);
  Word& w = row_words(i)[j / kWordBits];
  if (value)
    w |= bit;
  else
    w &= ~bit;
}

BitRow BitMatrix::row(std::size_t i) const {
  BitRow r(dim_);
  r.xor_words(row_words(i));
  return r;
}

void BitMatrix::set_row(std::size_t i, const BitRow& r) {
  if (r.dim() != dim_) throw PreconditionError("row dimension does not match matrix");
  auto dst = row_words(i);
  auto src = r.words();
  for (std::size_t w = 0; w < stride_; ++w) dst[w] = src[w];
}

BitRow BitMatrix::sum_rows(std::span<const std::uint32_t> indices) const {
  BitRow acc(dim_);
  for (std::uint32_t i : indices) {
    if (i >= rows_) throw PreconditionError("row index out of range");
    acc.xor_words(row_words(i));
  }
  return acc;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(dim_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    auto words = row_words(i);
    for (std::size_t w = 0; w < stride_; ++w) {
      Word bits = words[w];
      while (bits != 0) {
        const std::size_t j = w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
        t.set(j, i);
        bits &= bits - 1;
      }
    }
  }
  return t;
}

bool operator==(const BitMatrix& a, const BitMatrix& b) {
  return a.rows_ == b.rows_ && a.dim_ == b.dim_ && a.data_ == b.data_;
}

}  // namespace lcc
