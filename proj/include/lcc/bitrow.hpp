#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lcc/simd/bitops.hpp"

namespace lcc {

using simd::Word;

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

/// A vector over F2 of fixed dimension, packed LSB-first: bit j lives in
/// word j / 64 at position j % 64. Bits at positions >= dim() are always zero.
class BitRow {
 public:
  BitRow() = default;
  explicit BitRow(std::size_t dim) : dim_(dim), words_(words_for(dim), 0) {}

  static BitRow unit(std::size_t dim, std::size_t j);
  static BitRow from_indices(std::size_t dim, std::span<const std::uint32_t> indices);
  /// Characters '0'/'1', bit 0 first ("1100" has bits 0 and 1 set).
  static BitRow from_bits(std::string_view bits);
  /// ceil(dim/8) bytes as hex pairs, byte 0 first, LSB-first inside each byte.
  static BitRow from_hex(std::string_view hex, std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t word_count() const { return words_.size(); }

  bool get(std::size_t j) const { return (words_[j / kWordBits] >> (j % kWordBits)) & 1U; }
  void set(std::size_t j, bool value = true);
  void flip(std::size_t j) { words_[j / kWordBits] ^= Word{1} << (j % kWordBits); }
  void clear();

  BitRow& operator^=(const BitRow& other);
  /// XOR a raw packed row of the same dimension into this one.
  void xor_words(std::span<const Word> other);

  std::size_t weight() const;
  bool is_zero() const;
  /// kNoBit when zero.
  std::size_t lowest_set_bit() const;
  std::vector<std::uint32_t> support() const;

  std::span<const Word> words() const { return words_; }
  std::span<Word> words() { return words_; }

  std::string to_bits() const;
  std::string to_hex() const;

  friend bool operator==(const BitRow& a, const BitRow& b);
  friend BitRow operator^(BitRow a, const BitRow& b) {
    a ^= b;
    return a;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Word> words_;
};

std::size_t hamming_distance(const BitRow& a, const BitRow& b);

/// Row-major n x k matrix over F2 in one contiguous buffer.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t dim)
      : rows_(rows), dim_(dim), stride_(words_for(dim)), data_(rows * words_for(dim), 0) {}

  static BitMatrix from_rows(const std::vector<BitRow>& rows);
  static BitMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  std::size_t stride() const { return stride_; }

  std::span<const Word> row_words(std::size_t i) const { return {data_.data() + i * stride_, stride_}; }
  std::span<Word> row_words(std::size_t i) { return {data_.data() + i * stride_, stride_}; }

  bool get(std::size_t i, std::size_t j) const { return (row_words(i)[j / kWordBits] >> (j % kWordBits)) & 1U; }
  void set(std::size_t i, std::size_t j, bool value = true);

  BitRow row(std::size_t i) const;
  void set_row(std::size_t i, const BitRow& r);

  void xor_row_into(std::size_t i, BitRow& acc) const { acc.xor_words(row_words(i)); }

  /// XOR of the selected rows; indices may repeat (pairs cancel).
  BitRow sum_rows(std::span<const std::uint32_t> indices) const;

  BitMatrix transpose() const;

  friend bool operator==(const BitMatrix& a, const BitMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::size_t stride_ = 0;
  std::vector<Word> data_;
};

}  // namespace lcc
