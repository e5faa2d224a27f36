#include <doctest.h>

#include "lcc/compressor.hpp"
#include "lcc/errors.hpp"
#include "lcc/generators.hpp"
#include "lcc/rng.hpp"
#include "oracles.hpp"

using namespace lcc;

namespace {

// Rows v_y = y over F2^k with hand-picked matchings.
LccInstance planted(std::uint32_t k, std::uint32_t r, std::map<std::uint32_t, std::vector<Hyperedge>> edges) {
  LccInstance inst;
  inst.k = k;
  inst.n = 1U << k;
  inst.r = r;
  inst.rows = BitMatrix(inst.n, k);
  for (std::uint32_t y = 0; y < inst.n; ++y) inst.rows.row_words(y)[0] = y;
  for (auto& [t, list] : edges) inst.matchings[t] = Matching{t, list};
  inst.delta = Rational(1, inst.n);
  REQUIRE(validate_lcc(inst, false).passed());
  return inst;
}

// First seed whose drop stream gives edge e of color t the drop `want`, for each request.
std::uint64_t seed_with_drops(const std::vector<std::tuple<Hyperedge, std::uint32_t, std::uint32_t>>& wanted) {
  for (std::uint64_t seed = 0;; ++seed) {
    const std::uint64_t drop_seed = derive_seed(seed, stream::kDrops);
    bool ok = true;
    for (const auto& [edge, t, want] : wanted) ok = ok && designated_drop(edge, drop_seed, t, 0) == want;
    if (ok) return seed;
  }
}

}  // namespace

TEST_CASE("cancel_pairs keeps odd multiplicities") {
  CHECK(cancel_pairs({3, 1, 3, 2, 3}) == std::vector<std::uint32_t>{1, 2, 3});
  CHECK(cancel_pairs({4, 4}).empty());
  CHECK(cancel_pairs({}).empty());
}

TEST_CASE("initial representations") {
  const LccInstance h = gen_hadamard(4, 1, Rational(1, 4));
  const SparseRep zero = initial_representation(h, BitRow(4));
  CHECK(zero.support.empty());
  for (std::uint32_t y = 1; y < 16; ++y) {
    BitRow x(4);
    x.words()[0] = y;
    const SparseRep rep = initial_representation(h, x);
    CHECK(oracle::naive_sum(h.rows, rep.support) == x);
    CHECK(rep.length() <= 4);
    CHECK(oracle::min_representation(h.rows, x) == 1);  // the row y itself
  }
  CHECK_THROWS_AS(initial_representation(h, BitRow(5)), PreconditionError);

  const std::vector<std::uint32_t> t{0, 1, 2, 3, 4, 5, 6, 7};
  const LccInstance ker = gen_constraint_kernel(64, t, 4, 1);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const BitRow x = random_bitrow(ker.k, s);
    const SparseRep rep = initial_representation(ker, x);
    CHECK(oracle::naive_sum(ker.rows, rep.support) == x);
  }
}

TEST_CASE("soundness assertion fires on a broken representation") {
  const LccInstance h = gen_hadamard(4, 1, Rational(1, 4));
  SparseRep rep = initial_representation(h, BitRow::from_bits("1011"));
  CHECK_NOTHROW(assert_sound(h, rep));
  rep.support.push_back(15);
  CHECK_THROWS_AS(assert_sound(h, rep), InvariantViolation);
  rep.support = {3, 3};
  CHECK_THROWS_AS(assert_sound(h, rep), InvariantViolation);
}

TEST_CASE("shift graph edges") {
  const LccInstance inst = planted(3, 3, {{1, {{3, 4, 6}}}});
  const Hyperedge e{3, 4, 6};
  std::uint64_t drop_seed = 0;
  while (designated_drop(e, drop_seed, 1, 0) != 3) ++drop_seed;
  const ShiftGraph g = build_shift_graph(inst, {1}, {}, drop_seed);
  REQUIRE(g.graph.edges.size() == 1);
  CHECK(g.graph.edges[0] == ColoredEdge{4, 6, 1});
  CHECK(g.provenance[0] == std::pair<std::uint32_t, std::uint32_t>{1, 0});

  std::vector<char> excluded(8, 0);
  excluded[3] = 1;
  CHECK(build_shift_graph(inst, {1}, excluded, drop_seed).graph.edges.empty());
  CHECK(build_shift_graph(inst, {1}, {}, drop_seed, {{1, 0}}).graph.edges.empty());
  CHECK_THROWS_AS(build_shift_graph(inst, {2}, {}, drop_seed), PreconditionError);

  const LccInstance h3 = gen_hadamard(3, 1, Rational(1, 8));
  for (std::uint64_t s = 0; s < 10; ++s) CHECK(check_proper(build_shift_graph(h3, {2, 5}, {}, s).graph));
}

TEST_CASE("a planted 2-cycle covers both drops") {
  // {3,4,6} in H_1 and {3,4,5} in H_2 both leave {3,4} once 6 and 5 drop.
  const LccInstance inst = planted(3, 3, {{1, {{3, 4, 6}}}, {2, {{3, 4, 5}}}});
  const std::uint64_t seed = seed_with_drops({{{3, 4, 6}, 1, 6}, {{3, 4, 5}, 2, 5}});
  const CoverageState st = shift_coverage(inst, {1, 2}, 1000, seed, 2);
  CHECK(st.cycles_found >= 1);
  CHECK(st.end == CoverageEnd::target_reached);
  std::vector<std::uint32_t> W = st.W;
  std::sort(W.begin(), W.end());
  CHECK(W == std::vector<std::uint32_t>{5, 6});
  for (const auto& [j, rec] : st.shifts) {
    CHECK(rec.shift == std::vector<std::uint32_t>{5, 6});
    CHECK(verify_shift(inst, rec));
  }
}

TEST_CASE("no rainbow cycle means no coverage") {
  const LccInstance inst = planted(3, 3, {{1, {{3, 4, 6}}}, {2, {{0, 5, 7}}}});
  const CoverageState st = shift_coverage(inst, {1, 2}, 1000, 4);
  CHECK(st.end == CoverageEnd::absent_proven);
  CHECK(st.W.empty());
  CHECK(st.cycles_found == 0);
}

TEST_CASE("coverage records always re-verify") {
  const LccInstance h = gen_hadamard(6, 3, Rational(1, 4));
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::uint32_t> all(64);
    for (std::uint32_t i = 0; i < 64; ++i) all[i] = i;
    rng.shuffle(std::span<std::uint32_t>(all));
    const std::vector<std::uint32_t> T(all.begin(), all.begin() + 10);
    const CoverageState st = shift_coverage(h, T, 20000, rng.next());
    CHECK(st.W.size() == st.shifts.size());
    for (const auto& [j, rec] : st.shifts) {
      CHECK(verify_shift(h, rec));
      CHECK(rec.covered == j);
    }
    if (st.shrinking) CHECK(st.shrinking->size() + 2 <= T.size());
  }
  ShiftRecord forged{1, {1, 2}, 0, {1, 2, 4}};
  CHECK(!verify_shift(h, forged));
}

TEST_CASE("compression keeps the sum and shortens in steps of two") {
  const LccInstance h = gen_hadamard(6, 2, Rational(1, 4));
  CompressConfig cfg;
  cfg.min_part_size = 3;
  cfg.budget = 50000;
  cfg.keep_records = true;
  int shortened = 0;
  for (std::uint64_t s = 0; s < 8; ++s) {
    cfg.seed = s;
    const SparseRep start = random_representation(h, 40, derive_seed(s, 99));
    const CompressResult res = compress_from(h, start, cfg);
    CHECK(oracle::naive_sum(h.rows, res.rep.support) == start.x);
    const auto& L = res.trace.lengths;
    for (std::size_t i = 1; i < L.size(); ++i) CHECK(L[i] + 2 <= L[i - 1]);
    CHECK(L.back() == res.rep.length());
    for (const ShiftRecord& rec : res.trace.records) CHECK(verify_shift(h, rec));
    shortened += res.rep.length() < start.length();
  }
  CHECK(shortened > 0);
}

TEST_CASE("compress edge cases") {
  const LccInstance h = gen_hadamard(5, 1, Rational(1, 4));
  CompressConfig cfg;
  cfg.min_part_size = 1;
  const CompressResult zero = compress(h, BitRow(5), cfg);
  CHECK(zero.rep.support.empty());
  CHECK(zero.trace.rounds == 0);

  BitRow x(5);
  x.words()[0] = 13;
  const CompressResult single = compress_from(h, SparseRep{x, {13}}, cfg);
  CHECK(single.rep.support == std::vector<std::uint32_t>{13});

  LccInstance bare = h;
  bare.matchings.clear();
  const SparseRep start = random_representation(h, 20, 5);
  const CompressResult none = compress_from(bare, SparseRep{start.x, start.support}, cfg);
  CHECK(none.rep.support == start.support);
  CHECK(none.trace.rounds == 0);
  CHECK_THROWS_AS(compress_step(bare, start, cfg, 1), PreconditionError);
}

TEST_CASE("a planted overlap compresses") {
  // Two parts of a long support on a dense instance: some seed must find a
  // common covered index.
  const LccInstance h = gen_hadamard(6, 4, Rational(1, 4));
  CompressConfig cfg;
  cfg.min_part_size = 4;
  cfg.p_override = 2;
  cfg.budget = 100000;
  int successes = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const SparseRep start = random_representation(h, 16, s);
    const StepResult step = compress_step(h, start, cfg, s);
    CHECK(step.stats.parts == 2);
    if (!step.rep) continue;
    ++successes;
    CHECK(step.rep->length() + 2 <= start.length());
    CHECK(oracle::naive_sum(h.rows, step.rep->support) == start.x);
  }
  CHECK(successes > 0);
}

TEST_CASE("constraint-kernel traces never grow") {
  std::vector<std::uint32_t> t(128);
  for (std::uint32_t i = 0; i < 128; ++i) t[i] = i;
  const LccInstance ker = gen_constraint_kernel(128, t, 6, 3);
  REQUIRE(validate_lcc(ker, true).passed());
  CompressConfig cfg;
  cfg.min_part_size = 4;
  cfg.budget = 20000;
  for (std::uint64_t s = 0; s < 4; ++s) {
    cfg.seed = s;
    const SparseRep start = random_representation(ker, 50, s);
    const CompressResult res = compress_from(ker, start, cfg);
    CHECK(oracle::naive_sum(ker.rows, res.rep.support) == start.x);
    for (std::size_t i = 1; i < res.trace.lengths.size(); ++i)
      CHECK(res.trace.lengths[i] + 2 <= res.trace.lengths[i - 1]);
  }
}

TEST_CASE("r = 4 coverage through even covers") {
  // {1,2,8,14} in H_5 and {1,2,8,13} in H_6 share {1,2,8} once 14 and 13 drop.
  const Hyperedge e5{1, 2, 8, 14}, e6{1, 2, 8, 13};
  const LccInstance inst = planted(4, 4, {{5, {e5}}, {6, {e6}}});
  const std::uint64_t seed = seed_with_drops({{e5, 5, 14}, {e6, 6, 13}});
  const CoverageState st = shift_coverage(inst, {5, 6}, 1000, seed, 2);
  CHECK(st.shifts.size() == 2);
  for (const auto& [j, rec] : st.shifts) CHECK(verify_shift(inst, rec));

  // Disjoint matchings leave nothing to compress.
  const LccInstance apart = planted(4, 4, {{3, {{0, 1, 4, 6}}}, {5, {{8, 9, 10, 14}}}});
  CompressConfig cfg;
  cfg.min_part_size = 1;
  BitRow x(4);
  x.words()[0] = 3 ^ 5;
  const CompressResult res = compress_from(apart, SparseRep{x, {3, 5}}, cfg);
  CHECK(res.rep.length() == 2);
  CHECK(oracle::naive_sum(apart.rows, res.rep.support) == x);
  CHECK_THROWS_AS(compress_general(gen_hadamard(4, 1, Rational(1, 4)), x, cfg), PreconditionError);
}

TEST_CASE("covering-radius experiment") {
  const LccInstance h = gen_hadamard(4, 1, Rational(1, 4));
  CompressConfig cfg;
  cfg.min_part_size = 1;
  cfg.seed = 3;
  const CoverStats ex = covering_radius_experiment(h, true, 0, cfg);
  CHECK(ex.rows.size() == 16);
  CHECK(ex.max_initial <= 4);
  CHECK(ex.rows[0].final_len == 0);
  CHECK(ex.histogram.at(0) >= 1);
  CHECK(ex.bound_annotation > 0);

  const CoverStats a = covering_radius_experiment(h, false, 12, cfg);
  const CoverStats b = covering_radius_experiment(h, false, 12, cfg, 3);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].x == b.rows[i].x);
    CHECK(a.rows[i].final_len == b.rows[i].final_len);
    CHECK(a.rows[i].budget_spent == b.rows[i].budget_spent);
  }
  const RowSpanSolver solver(h.rows);
  const CoverRow again = cover_row(h, solver, a.rows[5].x, a.rows[5].seed, cfg);
  CHECK(again.final_len == a.rows[5].final_len);
  CHECK(again.cycles_found == a.rows[5].cycles_found);
}

TEST_CASE("outputs are never shorter than the true minimum") {
  int instances = 0;
  for (std::uint32_t n = 10; n <= 14; ++n) {
    std::vector<std::uint32_t> t(n);
    for (std::uint32_t i = 0; i < n; ++i) t[i] = i;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      LccInstance ker;
      try {
        ker = gen_constraint_kernel(n, t, 1, seed);
      } catch (const GenerationError&) {
        continue;  // the checks had full rank
      }
      ++instances;
      CompressConfig cfg;
      cfg.min_part_size = 2;
      cfg.budget = 20000;
      cfg.seed = seed;
      for (std::uint64_t s = 0; s < 5; ++s) {
        const SparseRep start = random_representation(ker, n, derive_seed(seed, s));
        const CompressResult res = compress_from(ker, start, cfg);
        CHECK(oracle::naive_sum(ker.rows, res.rep.support) == start.x);
        CHECK(res.rep.length() >= oracle::min_representation(ker.rows, start.x));
      }
    }
  }
  CHECK(instances > 0);
}
