#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lcc/bitrow.hpp"
#include "lcc/colored_graph.hpp"
#include "lcc/instance.hpp"
#include "lcc/linalg.hpp"
#include "lcc/rainbow.hpp"

namespace lcc {

/// x = sum of rows over `support`; support is sorted and duplicate-free.
struct SparseRep {
  BitRow x;
  std::vector<std::uint32_t> support;

  std::size_t length() const { return support.size(); }
};

/// Uniform vector of the given dimension.
BitRow random_bitrow(std::size_t dim, std::uint64_t seed);

/// Sorted set of indices with odd multiplicity.
std::vector<std::uint32_t> cancel_pairs(std::vector<std::uint32_t> multiset);

/// Throws InvariantViolation unless the rows over rep.support sum to rep.x
/// and the support is a sorted set.
void assert_sound(const LccInstance& inst, const SparseRep& rep);

/// A shift of `source` (one part T) covering `covered`: same row sum,
/// |shift| <= |source|, covered in shift.
struct ShiftRecord {
  std::uint32_t covered = 0;
  std::vector<std::uint32_t> shift;
  std::uint32_t part = 0;
  std::vector<std::uint32_t> source;
};

/// Independent re-check of a record's identity and size bound.
bool verify_shift(const LccInstance& inst, const ShiftRecord& record);

/// Drop vertex a_E for hyperedge number `edge` of H_t; fixed by the seed.
std::uint32_t designated_drop(const Hyperedge& e, std::uint64_t drop_seed, std::uint32_t t, std::uint32_t edge);

/// Colored graph G_T: for t in T and E in H_t with a_E not covered, the edge
/// E \ {a_E} in color t. provenance[g] = (t, index of E in H_t).
struct ShiftGraph {
  ColoredGraph graph;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> provenance;
};

/// For r = 3. Throws PreconditionError if some t in T has no matching.
/// `excluded` (may be empty) marks covered indices; `retired` (may be
/// empty) lists (t, edge) pairs to leave out.
ShiftGraph build_shift_graph(const LccInstance& inst, const std::vector<std::uint32_t>& T, const std::vector<char>& excluded,
                             std::uint64_t drop_seed,
                             const std::vector<std::pair<std::uint32_t, std::uint32_t>>& retired = {});

enum class CoverageEnd { running, target_reached, absent_proven, budget_exhausted };

const char* coverage_end_name(CoverageEnd e);

struct CoverageState {
  std::vector<std::uint32_t> T;
  std::vector<std::uint32_t> W;  // covered indices in discovery order
  std::vector<char> in_W;
  std::map<std::uint32_t, ShiftRecord> shifts;                          // j -> record
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> drops;  // (t, edge) -> a_E
  std::optional<std::vector<std::uint32_t>> shrinking;  // some T' with |T'| <= |T| - 2
  CoverageEnd end = CoverageEnd::running;
  std::uint64_t nodes_spent = 0;
  std::uint64_t cycles_found = 0;
  std::size_t longest_cycle = 0;
};

/// Resumable coverage run for one part: each advance() runs one exact search
/// on the current graph (rainbow cycle for r = 3, rainbow even cover of the
/// (r-1)-sets otherwise), pulls the witness back to T' and records every
/// newly covered index. The budget is shared by all searches of the run.
class CoverageRun {
 public:
  CoverageRun(const LccInstance& inst, std::vector<std::uint32_t> T, std::uint32_t part, std::uint64_t drop_seed,
              std::uint64_t budget, std::size_t target);

  /// One search. Returns the indices newly added to W (possibly none).
  std::vector<std::uint32_t> advance();
  bool done() const { return state_.end != CoverageEnd::running; }
  const CoverageState& state() const { return state_; }

 private:
  std::vector<std::uint32_t> record_witness(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& used);

  const LccInstance& inst_;
  std::uint32_t part_;
  std::uint64_t drop_seed_;
  std::uint64_t budget_;
  std::size_t target_;
  BitRow t_sum_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> retired_;
  CoverageState state_;
};

/// Drives a CoverageRun to completion. target 0 means ceil((delta/2) n).
CoverageState shift_coverage(const LccInstance& inst, const std::vector<std::uint32_t>& T, std::uint64_t budget,
                             std::uint64_t seed, std::size_t target = 0);

struct CompressConfig {
  std::uint32_t p_override = 0;  // 0: ceil(4/delta), clipped
  std::uint32_t min_part_size = 8;
  std::uint64_t budget = kDefaultSearchBudget;  // per coverage run
  std::uint32_t max_rounds = 8;                 // consecutive failed reseedings
  std::uint64_t seed = 0;
  std::size_t coverage_target = 0;  // 0: ceil((delta/2) n)
  bool keep_records = false;        // copy every ShiftRecord into the trace
};

struct StepStats {
  std::uint32_t parts = 0;
  std::uint64_t cycles_found = 0;
  std::uint64_t budget_spent = 0;
  std::size_t longest_cycle = 0;
  bool stopped_early = false;  // returned at the first intersection
};

struct StepResult {
  std::optional<SparseRep> rep;
  StepStats stats;
  std::vector<ShiftRecord> records;  // only with keep_records
};

/// Splits the matched part of the support into p seeded parts, runs their
/// coverage round-robin and returns a representation at least two shorter
/// as soon as two parts can cancel a common index. Unmatched support
/// indices are carried through unchanged. Throws PreconditionError when
/// fewer than 2 * min_part_size support indices have matchings.
StepResult compress_step(const LccInstance& inst, const SparseRep& rep, const CompressConfig& cfg, std::uint64_t step_seed);

struct CompressTrace {
  std::vector<std::size_t> lengths;  // initial length, then after each success
  std::uint32_t rounds = 0;          // compress_step calls
  std::uint32_t successes = 0;
  std::uint64_t cycles_found = 0;
  std::uint64_t budget_spent = 0;
  std::size_t longest_cycle = 0;
  std::uint32_t early_stops = 0;
  std::vector<ShiftRecord> records;  // only with keep_records
};

struct CompressResult {
  SparseRep rep;
  CompressTrace trace;
};

/// Pivot-supported representation, |support| <= rank. Throws
/// PreconditionError when x is outside the row span.
SparseRep initial_representation(const LccInstance& inst, const BitRow& x);
SparseRep initial_representation(const LccInstance& inst, const RowSpanSolver& solver, const BitRow& x);

/// `length` distinct random indices that have matchings (all of them if
/// fewer exist) and x = their row sum. A deliberately long starting point.
SparseRep random_representation(const LccInstance& inst, std::size_t length, std::uint64_t seed);

/// Fixpoint loop from `start`: compress_step under fresh round seeds until
/// max_rounds consecutive calls fail or too few matched indices remain.
CompressResult compress_from(const LccInstance& inst, SparseRep start, const CompressConfig& cfg);

/// compress_from(initial_representation(x)). Works for any r: r = 3 uses
/// rainbow cycles, other r use rainbow even covers.
CompressResult compress(const LccInstance& inst, const BitRow& x, const CompressConfig& cfg);

/// compress() restricted to r >= 4 instances.
CompressResult compress_general(const LccInstance& inst, const BitRow& x, const CompressConfig& cfg);

struct CoverRow {
  BitRow x;
  std::uint64_t seed = 0;  // seed of this row's compress run
  std::size_t initial_len = 0;
  std::size_t final_len = 0;
  std::uint32_t rounds = 0;
  std::uint64_t cycles_found = 0;
  std::uint64_t budget_spent = 0;
};

struct CoverStats {
  std::vector<CoverRow> rows;
  std::size_t max_initial = 0;
  std::size_t max_final = 0;
  double mean_final = 0;
  std::map<std::size_t, std::size_t> histogram;  // final length -> count
  double bound_annotation = 0;                   // delta^-2 log2 n log2 log2 n
};

/// Seed of the compress run for sample number `index`.
std::uint64_t cover_row_seed(std::uint64_t seed, std::uint64_t index);

/// The targets of a covering-radius run: all of F2^k in order (k <= 20), or
/// sample s drawn from derive_seed(derive_seed(seed, kSample), s).
std::vector<BitRow> cover_targets(const LccInstance& inst, bool exhaustive, std::size_t sample_count, std::uint64_t seed);

/// Compress every x in F2^k (k <= 20) or `sample_count` seeded samples.
/// threads > 1 distributes rows over workers; rows carry their own seeds,
/// so the table does not depend on the thread count.
CoverStats covering_radius_experiment(const LccInstance& inst, bool exhaustive, std::size_t sample_count,
                                      const CompressConfig& cfg, unsigned threads = 1);

/// Recomputes one row from its x and seed.
CoverRow cover_row(const LccInstance& inst, const RowSpanSolver& solver, const BitRow& x, std::uint64_t row_seed,
                   const CompressConfig& cfg);

}  // namespace lcc
