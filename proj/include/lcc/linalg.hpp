#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lcc/bitrow.hpp"

namespace lcc {

/// Incremental echelon basis over F2. Each stored pivot carries a tag: the
/// set of input rows whose XOR equals it. Rows are processed strictly in
/// insertion order and the pivot column of a row is its lowest set bit, so
/// results depend only on the input order.
class Eliminator {
 public:
  Eliminator(std::size_t dim, std::size_t tag_dim) : dim_(dim), tag_dim_(tag_dim) {}

  /// Reduces (value, tag) in place against every pivot.
  void reduce(BitRow& value, BitRow& tag) const;

  /// Inserts a row. Returns true if it was independent of the current basis;
  /// otherwise `value` is left zero and `tag` names a dependency.
  bool insert(BitRow& value, BitRow& tag);

  std::size_t rank() const { return pivots_.size(); }
  std::size_t dim() const { return dim_; }
  std::size_t tag_dim() const { return tag_dim_; }

 private:
  struct Pivot {
    std::size_t column;
    BitRow value;
    BitRow tag;
  };
  std::size_t dim_;
  std::size_t tag_dim_;
  std::vector<Pivot> pivots_;
};

std::size_t rank(const BitMatrix& m);

/// Basis of the left kernel { y : sum_{i : y_i = 1} row_i = 0 }; each vector
/// has length m.rows(). Size is rows - rank.
std::vector<BitRow> kernel_basis(const BitMatrix& m);

/// Repeated span queries against one fixed matrix.
class RowSpanSolver {
 public:
  explicit RowSpanSolver(const BitMatrix& m);

  std::size_t rank() const { return basis_.rank(); }

  /// Indicator y over the rows with XOR equal to x, supported on pivot rows
  /// (weight <= rank), or nullopt when x is outside the row span.
  std::optional<BitRow> solve(const BitRow& x) const;

 private:
  std::size_t rows_;
  Eliminator basis_;
};

std::optional<BitRow> solve_combination(const BitMatrix& m, const BitRow& x);

}  // namespace lcc
