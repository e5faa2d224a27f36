#include "lcc/linalg.hpp"

#include "lcc/errors.hpp"

namespace lcc {

void Eliminator::reduce(BitRow& value, BitRow& tag) const {
  for (const Pivot& p : pivots_) {
    if (value.get(p.column)) {
      value ^= p.value;
      tag ^= p.tag;
    }
  }
}

bool Eliminator::insert(BitRow& value, BitRow& tag) {
  if (value.dim() != dim_ || tag.dim() != tag_dim_) throw PreconditionError("eliminator row has wrong dimension");
  reduce(value, tag);
  const std::size_t lead = value.lowest_set_bit();
  if (lead == simd::kNoBit) return false;
  pivots_.push_back(Pivot{lead, value, tag});
  return true;
}

std::size_t rank(const BitMatrix& m) {
  Eliminator e(m.dim(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    BitRow value = m.row(i);
    BitRow tag(0);
    e.insert(value, tag);
  }
  return e.rank();
}

std::vector<BitRow> kernel_basis(const BitMatrix& m) {
  Eliminator e(m.dim(), m.rows());
  std::vector<BitRow> basis;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    BitRow value = m.row(i);
    BitRow tag = BitRow::unit(m.rows(), i);
    if (!e.insert(value, tag)) basis.push_back(std::move(tag));
  }
  return basis;
}

RowSpanSolver::RowSpanSolver(const BitMatrix& m) : rows_(m.rows()), basis_(m.dim(), m.rows()) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    BitRow value = m.row(i);
    BitRow tag = BitRow::unit(m.rows(), i);
    basis_.insert(value, tag);
  }
}

std::optional<BitRow> RowSpanSolver::solve(const BitRow& x) const {
  if (x.dim() != basis_.dim()) throw PreconditionError("target dimension does not match matrix");
  BitRow value = x;
  BitRow tag(rows_);
  basis_.reduce(value, tag);
  if (!value.is_zero()) return std::nullopt;
  return tag;
}

std::optional<BitRow> solve_combination(const BitMatrix& m, const BitRow& x) { return RowSpanSolver(m).solve(x); }

}  // namespace lcc
