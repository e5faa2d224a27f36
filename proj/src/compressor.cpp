#include "lcc/compressor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "lcc/errors.hpp"
#include "lcc/even_cover.hpp"
#include "lcc/rng.hpp"

namespace lcc {

BitRow random_bitrow(std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  BitRow x(dim);
  auto words = x.words();
  for (Word& w : words) w = rng.next();
  if (dim % kWordBits != 0 && !words.empty()) words.back() &= (Word{1} << (dim % kWordBits)) - 1;
  return x;
}

std::vector<std::uint32_t> cancel_pairs(std::vector<std::uint32_t> multiset) {
  std::sort(multiset.begin(), multiset.end());
  std::vector<std::uint32_t> out;
  out.reserve(multiset.size());
  for (std::size_t p = 0; p < multiset.size();) {
    std::size_t q = p;
    while (q < multiset.size() && multiset[q] == multiset[p]) ++q;
    if ((q - p) % 2 == 1) out.push_back(multiset[p]);
    p = q;
  }
  return out;
}

void assert_sound(const LccInstance& inst, const SparseRep& rep) {
  if (!std::is_sorted(rep.support.begin(), rep.support.end()) ||
      std::adjacent_find(rep.support.begin(), rep.support.end()) != rep.support.end())
    throw InvariantViolation("representation support is not a sorted set");
  if (!rep.support.empty() && rep.support.back() >= inst.n) throw InvariantViolation("support index >= n");
  if (!(inst.rows.sum_rows(rep.support) == rep.x)) throw InvariantViolation("rows over the support do not sum to x");
}

bool verify_shift(const LccInstance& inst, const ShiftRecord& record) {
  const auto& s = record.shift;
  if (std::adjacent_find(s.begin(), s.end(), [](auto a, auto b) { return a >= b; }) != s.end()) return false;
  if (!std::binary_search(s.begin(), s.end(), record.covered)) return false;
  if (s.size() > record.source.size()) return false;
  for (std::uint32_t t : s)
    if (t >= inst.n) return false;
  for (std::uint32_t t : record.source)
    if (t >= inst.n) return false;
  return inst.rows.sum_rows(s) == inst.rows.sum_rows(record.source);
}

std::uint32_t designated_drop(const Hyperedge& e, std::uint64_t drop_seed, std::uint32_t t, std::uint32_t edge) {
  return e[derive_seed(derive_seed(drop_seed, t), edge) % e.size()];
}

namespace {

using EdgeKey = std::pair<std::uint32_t, std::uint32_t>;

bool is_retired(const std::vector<EdgeKey>& retired, EdgeKey key) {
  return std::binary_search(retired.begin(), retired.end(), key);
}

const Matching& require_matching(const LccInstance& inst, std::uint32_t t) {
  const Matching* m = inst.matching_for(t);
  if (m == nullptr) throw PreconditionError("index " + std::to_string(t) + " has no matching");
  return *m;
}

// E \ {a_E} as colored (r-1)-sets, for any r.
struct ShiftHypergraph {
  ColoredHypergraph h;
  std::vector<EdgeKey> provenance;
};

ShiftHypergraph build_shift_hypergraph(const LccInstance& inst, const std::vector<std::uint32_t>& T,
                                       const std::vector<char>& excluded, std::uint64_t drop_seed,
                                       const std::vector<EdgeKey>& retired) {
  ShiftHypergraph out{ColoredHypergraph(inst.n), {}};
  for (std::uint32_t t : T) {
    const Matching& m = require_matching(inst, t);
    for (std::uint32_t e = 0; e < m.edges.size(); ++e) {
      if (is_retired(retired, {t, e})) continue;
      const Hyperedge& edge = m.edges[e];
      const std::uint32_t a = designated_drop(edge, drop_seed, t, e);
      if (!excluded.empty() && excluded[a]) continue;
      Hyperedge rest;
      for (std::uint32_t v : edge)
        if (v != a) rest.push_back(v);
      if (rest.empty()) continue;  // r = 1: nothing left to pair up
      out.h.add_edge(std::move(rest), t);
      out.provenance.push_back({t, e});
    }
  }
  if (!check_proper(out.h)) throw InvariantViolation("shift hypergraph is not properly colored; matchings overlap");
  return out;
}

}  // namespace

ShiftGraph build_shift_graph(const LccInstance& inst, const std::vector<std::uint32_t>& T, const std::vector<char>& excluded,
                             std::uint64_t drop_seed, const std::vector<EdgeKey>& retired) {
  ShiftGraph out{ColoredGraph(inst.n), {}};
  for (std::uint32_t t : T) {
    const Matching& m = require_matching(inst, t);
    for (std::uint32_t e = 0; e < m.edges.size(); ++e) {
      const Hyperedge& edge = m.edges[e];
      if (edge.size() != 3) throw PreconditionError("build_shift_graph needs 3-uniform matchings");
      if (is_retired(retired, {t, e})) continue;
      const std::uint32_t a = designated_drop(edge, drop_seed, t, e);
      if (!excluded.empty() && excluded[a]) continue;
      std::uint32_t ends[2];
      int k = 0;
      for (std::uint32_t v : edge)
        if (v != a) ends[k++] = v;
      out.graph.add_edge(ends[0], ends[1], t);
      out.provenance.push_back({t, e});
    }
  }
  if (!check_proper(out.graph)) throw InvariantViolation("shift graph is not properly colored; matchings overlap");
  return out;
}

const char* coverage_end_name(CoverageEnd e) {
  switch (e) {
    case CoverageEnd::running:
      return "running";
    case CoverageEnd::target_reached:
      return "target_reached";
    case CoverageEnd::absent_proven:
      return "absent_proven";
    case CoverageEnd::budget_exhausted:
      return "budget_exhausted";
  }
  return "?";
}

namespace {
std::size_t default_coverage_target(const LccInstance& inst) {
  // ceil((delta/2) n), at least one index.
  return static_cast<std::size_t>(std::max<std::int64_t>(1, ceil_times(inst.delta / 2, inst.n)));
}
}  // namespace

CoverageRun::CoverageRun(const LccInstance& inst, std::vector<std::uint32_t> T, std::uint32_t part, std::uint64_t drop_seed,
                         std::uint64_t budget, std::size_t target)
    : inst_(inst), part_(part), drop_seed_(drop_seed), budget_(budget), target_(target) {
  std::sort(T.begin(), T.end());
  if (std::adjacent_find(T.begin(), T.end()) != T.end()) throw PreconditionError("coverage part must be a set");
  for (std::uint32_t t : T) {
    if (t >= inst.n) throw PreconditionError("part index >= n");
    const Matching& m = require_matching(inst, t);
    for (std::uint32_t e = 0; e < m.edges.size(); ++e) state_.drops[{t, e}] = designated_drop(m.edges[e], drop_seed, t, e);
  }
  if (target_ == 0) target_ = default_coverage_target(inst);
  t_sum_ = inst.rows.sum_rows(T);
  state_.T = std::move(T);
  state_.in_W.assign(inst.n, 0);
}

std::vector<std::uint32_t> CoverageRun::advance() {
  if (done()) return {};
  if (state_.nodes_spent >= budget_) {
    state_.end = CoverageEnd::budget_exhausted;
    return {};
  }
  const std::uint64_t remaining = budget_ - state_.nodes_spent;
  std::vector<EdgeKey> used;
  SearchStatus status;
  std::size_t witness_length = 0;
  if (inst_.r == 3) {
    const ShiftGraph g = build_shift_graph(inst_, state_.T, state_.in_W, drop_seed_, retired_);
    const auto outcome = find_rainbow_cycle(g.graph, remaining);
    state_.nodes_spent += outcome.nodes_expanded;
    status = outcome.status;
    if (outcome.found()) {
      if (!verify_rainbow_cycle(g.graph, *outcome.witness)) throw InvariantViolation("rainbow cycle failed verification");
      for (std::uint32_t e : outcome.witness->edges) used.push_back(g.provenance[e]);
      witness_length = outcome.witness->length();
    }
  } else {
    const ShiftHypergraph g = build_shift_hypergraph(inst_, state_.T, state_.in_W, drop_seed_, retired_);
    const auto outcome = find_rainbow_even_cover(g.h, remaining);
    state_.nodes_spent += outcome.nodes_expanded;
    status = outcome.status;
    if (outcome.found()) {
      if (!verify_even_cover(g.h, *outcome.witness)) throw InvariantViolation("even cover failed verification");
      for (std::uint32_t e : outcome.witness->edges) used.push_back(g.provenance[e]);
      witness_length = outcome.witness->edges.size();
    }
  }
  if (status == SearchStatus::absent_proven) {
    state_.end = CoverageEnd::absent_proven;
    return {};
  }
  if (status == SearchStatus::budget_exhausted) {
    state_.end = CoverageEnd::budget_exhausted;
    return {};
  }
  ++state_.cycles_found;
  state_.longest_cycle = std::max(state_.longest_cycle, witness_length);
  std::vector<std::uint32_t> fresh = record_witness(used);
  if (fresh.empty()) {
    // Nothing new: retire the witness so the next search moves on.
    retired_.insert(retired_.end(), used.begin(), used.end());
    std::sort(retired_.begin(), retired_.end());
  }
  if (state_.W.size() >= target_) state_.end = CoverageEnd::target_reached;
  return fresh;
}

std::vector<std::uint32_t> CoverageRun::record_witness(const std::vector<EdgeKey>& used) {
  // T' = (T \ {t_s}) + {a_{E_s}}, pairs cancelled.
  std::vector<std::uint32_t> multiset;
  multiset.reserve(state_.T.size() + used.size());
  std::vector<std::uint32_t> colors;
  std::vector<std::uint32_t> drops;
  for (const EdgeKey& key : used) {
    colors.push_back(key.first);
    drops.push_back(state_.drops.at(key));
  }
  std::sort(colors.begin(), colors.end());
  for (std::uint32_t t : state_.T)
    if (!std::binary_search(colors.begin(), colors.end(), t)) multiset.push_back(t);
  multiset.insert(multiset.end(), drops.begin(), drops.end());
  std::vector<std::uint32_t> shift = cancel_pairs(std::move(multiset));

  if (shift.size() > state_.T.size()) throw InvariantViolation("shift is longer than its source part");
  if (!(inst_.rows.sum_rows(shift) == t_sum_)) throw InvariantViolation("shift changes the row sum of its part");
  if (shift.size() + 2 <= state_.T.size() && !state_.shrinking) state_.shrinking = shift;

  std::vector<std::uint32_t> fresh;
  for (std::uint32_t a : drops) {
    if (state_.in_W[a] || !std::binary_search(shift.begin(), shift.end(), a)) continue;
    state_.in_W[a] = 1;
    state_.W.push_back(a);
    state_.shifts[a] = ShiftRecord{a, shift, part_, state_.T};
    fresh.push_back(a);
  }
  return fresh;
}

CoverageState shift_coverage(const LccInstance& inst, const std::vector<std::uint32_t>& T, std::uint64_t budget,
                             std::uint64_t seed, std::size_t target) {
  CoverageRun run(inst, T, 0, derive_seed(seed, stream::kDrops), budget, target);
  while (!run.done()) run.advance();
  return run.state();
}

namespace {

std::uint32_t part_count(const LccInstance& inst, std::size_t matched, const CompressConfig& cfg) {
  std::size_t p;
  if (cfg.p_override != 0) {
    p = cfg.p_override;
  } else {
    p = matched / std::max<std::uint32_t>(cfg.min_part_size, 1);
    if (inst.delta > 0) p = std::min<std::size_t>(p, static_cast<std::size_t>(ceil_times(Rational(4) / inst.delta, 1)));
  }
  p = std::max<std::size_t>(p, 2);
  return static_cast<std::uint32_t>(std::min(p, matched));
}

}  // namespace

StepResult compress_step(const LccInstance& inst, const SparseRep& rep, const CompressConfig& cfg, std::uint64_t step_seed) {
  std::vector<std::uint32_t> matched;
  std::vector<std::uint32_t> passthrough;
  for (std::uint32_t i : rep.support) (inst.matching_for(i) != nullptr ? matched : passthrough).push_back(i);
  if (matched.size() < 2 * std::size_t{std::max<std::uint32_t>(cfg.min_part_size, 1)})
    throw PreconditionError("compress_step needs at least 2 * min_part_size matched support indices");

  const std::uint32_t p = part_count(inst, matched.size(), cfg);
  Rng rng(derive_seed(step_seed, stream::kPartition));
  rng.shuffle(std::span<std::uint32_t>(matched));
  std::vector<std::vector<std::uint32_t>> parts(p);
  for (std::size_t j = 0; j < matched.size(); ++j) parts[j * p / matched.size()].push_back(matched[j]);

  const std::size_t target = cfg.coverage_target != 0 ? cfg.coverage_target : default_coverage_target(inst);
  const std::uint64_t part_seed = derive_seed(step_seed, stream::kPart);
  std::vector<CoverageRun> runs;
  runs.reserve(p);
  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> home(inst.n, kNone);  // part holding i in its source T
  for (std::uint32_t l = 0; l < p; ++l) {
    runs.emplace_back(inst, parts[l], l, derive_seed(part_seed, l), cfg.budget, target);
    for (std::uint32_t i : parts[l]) home[i] = l;
  }

  StepResult result;
  result.stats.parts = p;
  auto finish = [&]() {
    for (const CoverageRun& run : runs) {
      result.stats.cycles_found += run.state().cycles_found;
      result.stats.budget_spent += run.state().nodes_spent;
      result.stats.longest_cycle = std::max(result.stats.longest_cycle, run.state().longest_cycle);
      if (cfg.keep_records)
        for (const auto& [j, record] : run.state().shifts) result.records.push_back(record);
    }
  };
  // Replace parts l1 and l2 by the given sets and cancel.
  auto combine = [&](std::uint32_t l1, const std::vector<std::uint32_t>& s1, std::uint32_t l2,
                     const std::vector<std::uint32_t>& s2) {
    std::vector<std::uint32_t> multiset = passthrough;
    for (std::uint32_t l = 0; l < p; ++l)
      if (l != l1 && l != l2) multiset.insert(multiset.end(), parts[l].begin(), parts[l].end());
    multiset.insert(multiset.end(), s1.begin(), s1.end());
    multiset.insert(multiset.end(), s2.begin(), s2.end());
    SparseRep out{rep.x, cancel_pairs(std::move(multiset))};
    assert_sound(inst, out);
    if (out.length() + 2 > rep.length()) throw InvariantViolation("compress_step did not shorten the representation");
    result.stats.stopped_early = std::any_of(runs.begin(), runs.end(), [](const CoverageRun& r) { return !r.done(); });
    result.rep = std::move(out);
  };

  std::vector<std::uint32_t> first_cover(inst.n, kNone);
  bool active = true;
  while (active && !result.rep) {
    active = false;
    for (std::uint32_t l = 0; l < p && !result.rep; ++l) {
      if (runs[l].done()) continue;
      active = true;
      const std::vector<std::uint32_t> fresh = runs[l].advance();
      const CoverageState& st = runs[l].state();
      if (st.shrinking) {
        combine(l, *st.shrinking, l, {});
        break;
      }
      for (std::uint32_t j : fresh) {
        const std::vector<std::uint32_t>& mine = st.shifts.at(j).shift;
        if (first_cover[j] != kNone && first_cover[j] != l) {
          combine(first_cover[j], runs[first_cover[j]].state().shifts.at(j).shift, l, mine);
          break;
        }
        if (home[j] != kNone && home[j] != l) {
          // j sits in another part's own T, which trivially shifts to itself.
          combine(home[j], parts[home[j]], l, mine);
          break;
        }
        if (first_cover[j] == kNone) first_cover[j] = l;
      }
    }
  }
  finish();
  return result;
}

SparseRep initial_representation(const LccInstance& inst, const RowSpanSolver& solver, const BitRow& x) {
  if (x.dim() != inst.k) throw PreconditionError("x has dimension " + std::to_string(x.dim()) + ", expected k");
  const std::optional<BitRow> y = solver.solve(x);
  if (!y) throw PreconditionError("x is outside the row span (rank(rows) < k?)");
  SparseRep rep{x, y->support()};
  assert_sound(inst, rep);
  return rep;
}

SparseRep initial_representation(const LccInstance& inst, const BitRow& x) {
  return initial_representation(inst, RowSpanSolver(inst.rows), x);
}

SparseRep random_representation(const LccInstance& inst, std::size_t length, std::uint64_t seed) {
  std::vector<std::uint32_t> matched;
  for (const auto& [i, m] : inst.matchings) matched.push_back(i);
  Rng rng(seed);
  rng.shuffle(std::span<std::uint32_t>(matched));
  matched.resize(std::min(length, matched.size()));
  std::sort(matched.begin(), matched.end());
  SparseRep rep{inst.rows.sum_rows(matched), std::move(matched)};
  return rep;
}

CompressResult compress_from(const LccInstance& inst, SparseRep start, const CompressConfig& cfg) {
  assert_sound(inst, start);
  CompressResult out{std::move(start), {}};
  out.trace.lengths.push_back(out.rep.length());
  const std::size_t needed = 2 * std::size_t{std::max<std::uint32_t>(cfg.min_part_size, 1)};
  const std::uint64_t round_seed = derive_seed(cfg.seed, stream::kRound);
  std::uint32_t failures = 0;
  while (failures < cfg.max_rounds) {
    const auto matched = std::count_if(out.rep.support.begin(), out.rep.support.end(),
                                       [&](std::uint32_t i) { return inst.matching_for(i) != nullptr; });
    if (static_cast<std::size_t>(matched) < needed) break;
    StepResult step = compress_step(inst, out.rep, cfg, derive_seed(round_seed, out.trace.rounds));
    ++out.trace.rounds;
    out.trace.cycles_found += step.stats.cycles_found;
    out.trace.budget_spent += step.stats.budget_spent;
    out.trace.longest_cycle = std::max(out.trace.longest_cycle, step.stats.longest_cycle);
    if (cfg.keep_records)
      out.trace.records.insert(out.trace.records.end(), std::make_move_iterator(step.records.begin()),
                               std::make_move_iterator(step.records.end()));
    if (!step.rep) {
      ++failures;
      continue;
    }
    assert_sound(inst, *step.rep);
    if (step.rep->length() + 2 > out.rep.length()) throw InvariantViolation("successful step shortened by less than 2");
    out.rep = std::move(*step.rep);
    out.trace.lengths.push_back(out.rep.length());
    ++out.trace.successes;
    if (step.stats.stopped_early) ++out.trace.early_stops;
    failures = 0;
  }
  return out;
}

CompressResult compress(const LccInstance& inst, const BitRow& x, const CompressConfig& cfg) {
  return compress_from(inst, initial_representation(inst, x), cfg);
}

CompressResult compress_general(const LccInstance& inst, const BitRow& x, const CompressConfig& cfg) {
  if (inst.r < 4) throw PreconditionError("compress_general needs r >= 4");
  return compress(inst, x, cfg);
}

std::vector<BitRow> cover_targets(const LccInstance& inst, bool exhaustive, std::size_t sample_count, std::uint64_t seed) {
  std::vector<BitRow> xs;
  if (exhaustive) {
    if (inst.k > 20) throw PreconditionError("exhaustive mode needs k <= 20");
    xs.reserve(std::size_t{1} << inst.k);
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << inst.k); ++y) {
      BitRow x(inst.k);
      x.words()[0] = y;
      xs.push_back(std::move(x));
    }
  } else {
    const std::uint64_t sample_seed = derive_seed(seed, stream::kSample);
    for (std::size_t s = 0; s < sample_count; ++s) xs.push_back(random_bitrow(inst.k, derive_seed(sample_seed, s)));
  }
  return xs;
}

std::uint64_t cover_row_seed(std::uint64_t seed, std::uint64_t index) {
  return derive_seed(derive_seed(seed, stream::kRow), index);
}

CoverRow cover_row(const LccInstance& inst, const RowSpanSolver& solver, const BitRow& x, std::uint64_t row_seed,
                   const CompressConfig& cfg) {
  CompressConfig local = cfg;
  local.seed = row_seed;
  local.keep_records = false;
  CompressResult res = compress_from(inst, initial_representation(inst, solver, x), local);
  CoverRow row;
  row.x = x;
  row.seed = row_seed;
  row.initial_len = res.trace.lengths.front();
  row.final_len = res.rep.length();
  row.rounds = res.trace.rounds;
  row.cycles_found = res.trace.cycles_found;
  row.budget_spent = res.trace.budget_spent;
  return row;
}

CoverStats covering_radius_experiment(const LccInstance& inst, bool exhaustive, std::size_t sample_count,
                                      const CompressConfig& cfg, unsigned threads) {
  const std::vector<BitRow> xs = cover_targets(inst, exhaustive, sample_count, cfg.seed);

  const RowSpanSolver solver(inst.rows);
  CoverStats stats;
  stats.rows.resize(xs.size());
  auto work = [&](std::size_t index) { stats.rows[index] = cover_row(inst, solver, xs[index], cover_row_seed(cfg.seed, index), cfg); };
  if (threads <= 1) {
    for (std::size_t index = 0; index < xs.size(); ++index) work(index);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t index; !failed && (index = next++) < xs.size();) {
          try {
            work(index);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  double total = 0;
  for (const CoverRow& row : stats.rows) {
    stats.max_initial = std::max(stats.max_initial, row.initial_len);
    stats.max_final = std::max(stats.max_final, row.final_len);
    total += static_cast<double>(row.final_len);
    ++stats.histogram[row.final_len];
  }
  stats.mean_final = stats.rows.empty() ? 0.0 : total / static_cast<double>(stats.rows.size());
  const double n = inst.n;
  const double delta = to_double(inst.delta);
  if (delta > 0 && n > 2) stats.bound_annotation = std::log2(n) * std::log2(std::log2(n)) / (delta * delta);
  return stats;
}

}  // namespace lcc
