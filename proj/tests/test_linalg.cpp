#include <doctest.h>

#include "lcc/errors.hpp"
#include "lcc/linalg.hpp"
#include "lcc/prime_field.hpp"
#include "lcc/rng.hpp"
#include "oracles.hpp"

using namespace lcc;

namespace {

BitMatrix matrix_of(std::initializer_list<const char*> rows) {
  std::vector<BitRow> r;
  for (const char* s : rows) r.push_back(BitRow::from_bits(s));
  return BitMatrix::from_rows(r);
}

BitMatrix random_matrix(Rng& rng, std::size_t n, std::size_t k, std::uint64_t sparsity) {
  BitMatrix m(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (rng.below(sparsity) == 0) m.set(i, j);
  return m;
}

// Rank by brute force: log2 of the number of distinct subset sums.
std::size_t brute_rank(const BitMatrix& m) {
  std::vector<BitRow> span{BitRow(m.dim())};
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const BitRow r = m.row(i);
    bool inside = false;
    for (const BitRow& s : span) inside = inside || s == r;
    if (inside) continue;
    const std::size_t size = span.size();
    for (std::size_t s = 0; s < size; ++s) span.push_back(span[s] ^ r);
  }
  std::size_t rk = 0;
  while ((std::size_t{1} << rk) < span.size()) ++rk;
  return rk;
}

}  // namespace

TEST_CASE("rank examples") {
  CHECK(rank(BitMatrix(3, 4)) == 0);
  CHECK(rank(BitMatrix::identity(4)) == 4);
  CHECK(rank(matrix_of({"1100", "0110", "1010"})) == 2);
  CHECK(rank(BitMatrix(0, 5)) == 0);
}

TEST_CASE("kernel examples") {
  CHECK(kernel_basis(BitMatrix::identity(3)).empty());
  const auto dup = kernel_basis(matrix_of({"101", "101"}));
  REQUIRE(dup.size() == 1);
  CHECK(dup[0].to_bits() == "11");
  const auto k3 = kernel_basis(matrix_of({"10", "01", "11"}));
  REQUIRE(k3.size() == 1);
  CHECK(k3[0].to_bits() == "111");
}

TEST_CASE("solve examples") {
  const BitMatrix id = BitMatrix::identity(4);
  const auto zero = solve_combination(id, BitRow(4));
  REQUIRE(zero);
  CHECK(zero->is_zero());
  const auto e2 = solve_combination(id, BitRow::unit(4, 2));
  REQUIRE(e2);
  CHECK(e2->support() == std::vector<std::uint32_t>{2});

  const BitMatrix m = matrix_of({"110", "011", "101"});
  const BitRow x = BitRow::from_bits("101");
  const auto y = solve_combination(m, x);
  REQUIRE(y);
  CHECK(oracle::naive_sum(m, y->support()) == x);
  CHECK(!solve_combination(m, BitRow::from_bits("100")));
}

TEST_CASE("rank and kernel against brute force on random matrices") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(10), k = 1 + rng.below(10);
    const BitMatrix m = random_matrix(rng, n, k, 1 + rng.below(3));
    CAPTURE(trial);
    const std::size_t rk = rank(m);
    CHECK(rk == brute_rank(m));
    const auto kernel = kernel_basis(m);
    CHECK(rk + kernel.size() == n);
    for (const BitRow& y : kernel) {
      CHECK(y.dim() == n);
      CHECK(!y.is_zero());
      CHECK(oracle::naive_sum(m, y.support()).is_zero());
    }
    // The kernel vectors are independent.
    if (!kernel.empty()) CHECK(rank(BitMatrix::from_rows(kernel)) == kernel.size());
  }
}

TEST_CASE("solve reproduces x for 1000 random in-span targets") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(64), k = 1 + rng.below(64);
    const BitMatrix m = random_matrix(rng, n, k, 1 + rng.below(4));
    std::vector<std::uint32_t> pick;
    for (std::uint32_t i = 0; i < n; ++i)
      if (rng.below(2)) pick.push_back(i);
    const BitRow x = m.sum_rows(pick);
    const RowSpanSolver solver(m);
    const auto y = solver.solve(x);
    REQUIRE(y);
    CHECK(y->dim() == n);
    CHECK(y->weight() <= solver.rank());
    CHECK(oracle::naive_sum(m, y->support()) == x);
  }
}

TEST_CASE("out-of-span targets are reported") {
  Rng rng(11);
  int outside = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const BitMatrix m = random_matrix(rng, 3, 8, 2);
    BitRow x(8);
    for (std::size_t j = 0; j < 8; ++j)
      if (rng.below(2)) x.set(j);
    const auto y = solve_combination(m, x);
    const bool in_span = oracle::min_representation(m, x) != oracle::kNoRepresentation;
    CHECK(y.has_value() == in_span);
    outside += !in_span;
  }
  CHECK(outside > 0);
}

TEST_CASE("eliminator tags name the dependency") {
  Eliminator e(3, 3);
  const char* rows[] = {"110", "011", "101"};
  for (std::size_t i = 0; i < 3; ++i) {
    BitRow v = BitRow::from_bits(rows[i]);
    BitRow tag = BitRow::unit(3, i);
    const bool independent = e.insert(v, tag);
    if (i < 2) {
      CHECK(independent);
    } else {
      CHECK(!independent);
      CHECK(v.is_zero());
      CHECK(tag.to_bits() == "111");
    }
  }
  CHECK(e.rank() == 2);
}

TEST_CASE("prime field examples") {
  const PrimeField f5(5);
  CHECK(f5.inv(2) == 3);
  const PrimeField f2(2);
  CHECK(f2.add(1, 1) == 0);
  const PrimeField f7(7);
  CHECK(f7.mul(3, f7.neg(3)) == 5);
  CHECK(f7.reduce(-1) == 6);
  CHECK_THROWS_AS(f7.inv(0), std::domain_error);
  CHECK_THROWS_AS(PrimeField(4), PreconditionError);
  CHECK_THROWS_AS(PrimeField(1), PreconditionError);
  CHECK_THROWS_AS(PrimeField(65537), PreconditionError);
  CHECK_NOTHROW(PrimeField(65521));

  const FqElement a(3, 7), b(5, 7);
  CHECK((a * b).value() == 1);
  CHECK((a - b).value() == 5);
  CHECK((-a).value() == 4);
  CHECK((a * a.inv()).value() == 1);
  CHECK_THROWS(a + FqElement(1, 5));
  CHECK(fq_weight(std::vector<std::uint32_t>{0, 3, 0, 1}) == 2);
}

TEST_CASE("field inverses and axpy match naive arithmetic") {
  for (std::uint32_t q : {2U, 3U, 5U, 7U, 13U, 251U, 65521U}) {
    const PrimeField f(q);
    Rng rng(q);
    for (int t = 0; t < 200; ++t) {
      const auto a = static_cast<std::uint32_t>(1 + rng.below(q - 1));
      CHECK((std::uint64_t{a} * f.inv(a)) % q == 1);
    }
    std::vector<std::uint32_t> dst{0, 1 % q, (q - 1)}, src{q - 1, q - 1, 1 % q};
    const std::uint32_t c = q - 1;
    std::vector<std::uint32_t> expect(3);
    for (int i = 0; i < 3; ++i) expect[i] = static_cast<std::uint32_t>((dst[i] + std::uint64_t{c} * src[i]) % q);
    f.axpy(dst, c, src);
    CHECK(dst == expect);
  }
  CHECK(is_prime(2));
  CHECK(!is_prime(1));
  CHECK(!is_prime(91));
  CHECK(is_prime(65521));
}
