#include "lcc/even_cover.hpp"

#include <algorithm>
#include <tuple>

#include "lcc/bitrow.hpp"
#include "lcc/errors.hpp"

namespace lcc {

namespace {

enum class Step { none, found, out_of_budget };

class CoverSearch {
 public:
  CoverSearch(const ColoredHypergraph& h, std::uint64_t budget)
      : h_(h), incidence_(h.n), state_(h.n), budget_(budget) {
    std::vector<std::uint32_t> colors;
    for (const ColoredHyperedge& e : h.edges) colors.push_back(e.color);
    std::sort(colors.begin(), colors.end());
    colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
    color_count_ = colors.size();
    used_.assign(colors.size(), 0);
    dense_.reserve(h.edges.size());
    min_vertex_.reserve(h.edges.size());
    for (std::uint32_t id = 0; id < h.edges.size(); ++id) {
      const ColoredHyperedge& e = h.edges[id];
      dense_.push_back(static_cast<std::uint32_t>(std::lower_bound(colors.begin(), colors.end(), e.color) - colors.begin()));
      min_vertex_.push_back(*std::min_element(e.vertices.begin(), e.vertices.end()));
      max_size_ = std::max(max_size_, e.vertices.size());
      for (std::uint32_t a : e.vertices) incidence_[a].push_back(id);
    }
    auto order = [&](std::uint32_t a, std::uint32_t b) { return std::tie(dense_[a], a) < std::tie(dense_[b], b); };
    for (auto& list : incidence_) std::sort(list.begin(), list.end(), order);
    roots_.resize(h.edges.size());
    for (std::uint32_t id = 0; id < roots_.size(); ++id) roots_[id] = id;
    std::sort(roots_.begin(), roots_.end(), [&](std::uint32_t a, std::uint32_t b) {
      return std::tie(min_vertex_[a], dense_[a], a) < std::tie(min_vertex_[b], dense_[b], b);
    });
  }

  std::size_t color_count() const { return color_count_; }
  std::uint64_t nodes() const { return nodes_; }
  const std::vector<std::uint32_t>& chosen() const { return chosen_; }

  Step search_size(std::size_t limit, bool& reached) {
    limit_ = limit;
    reached_ = false;
    for (std::uint32_t root : roots_) {
      root_ = root;
      toggle(root);
      const Step s = extend();
      if (s != Step::none) {
        reached = reached_;
        return s;
      }
      toggle(root);
    }
    reached = reached_;
    return Step::none;
  }

 private:
  void toggle(std::uint32_t id) {
    for (std::uint32_t a : h_.edges[id].vertices) state_.flip(a);
    char& u = used_[dense_[id]];
    u = !u;
    if (u)
      chosen_.push_back(id);
    else
      chosen_.pop_back();
  }

  Step extend() {
    if (nodes_ >= budget_) return Step::out_of_budget;
    ++nodes_;
    if (state_.is_zero()) return Step::found;
    const std::size_t depth = chosen_.size();
    if (depth == limit_ || state_.weight() > (limit_ - depth) * max_size_) {
      reached_ = true;
      return Step::none;
    }
    const std::uint32_t low = static_cast<std::uint32_t>(state_.lowest_set_bit());
    const std::uint32_t u = min_vertex_[root_];
    for (std::uint32_t id : incidence_[low]) {
      if (used_[dense_[id]] || min_vertex_[id] < u) continue;
      // Edges through u other than the root come later in root order.
      if (min_vertex_[id] == u && std::tie(dense_[id], id) < std::tie(dense_[root_], root_)) continue;
      toggle(id);
      const Step s = extend();
      if (s != Step::none) return s;
      toggle(id);
    }
    return Step::none;
  }

  const ColoredHypergraph& h_;
  std::vector<std::vector<std::uint32_t>> incidence_;
  std::vector<std::uint32_t> dense_;
  std::vector<std::uint32_t> min_vertex_;
  std::vector<std::uint32_t> roots_;
  std::vector<char> used_;
  std::vector<std::uint32_t> chosen_;
  BitRow state_;
  std::size_t color_count_ = 0;
  std::size_t max_size_ = 0;
  std::size_t limit_ = 0;
  std::uint32_t root_ = 0;
  bool reached_ = false;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
};

void require_well_formed(const ColoredHypergraph& h) {
  for (const ColoredHyperedge& e : h.edges) {
    if (e.vertices.empty()) throw PreconditionError("empty hyperedge");
    Hyperedge sorted = e.vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.back() >= h.n)
      throw PreconditionError("hyperedge " + format_edge(e.vertices) + " repeats a vertex or leaves [0, n)");
  }
  if (!check_proper(h)) throw PreconditionError("some color class is not a matching");
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t j = 1; j <= k; ++j) {
    // r * (n - k + j) / j stays exact; saturate instead of overflowing.
    const std::uint64_t num = n - k + j;
    if (r > UINT64_MAX / num) return UINT64_MAX;
    r = r * num / j;
  }
  return r;
}

// Calls f(chosen) for every size-m subset of items, in lexicographic order.
template <class F>
void for_each_combination(const std::vector<std::uint32_t>& items, std::size_t m, F&& f) {
  if (m > items.size()) return;
  std::vector<std::size_t> idx(m);
  for (std::size_t j = 0; j < m; ++j) idx[j] = j;
  std::vector<std::uint32_t> chosen(m);
  while (true) {
    for (std::size_t j = 0; j < m; ++j) chosen[j] = items[idx[j]];
    f(chosen);
    std::size_t j = m;
    while (j > 0 && idx[j - 1] == items.size() - m + j - 1) --j;
    if (j == 0) return;
    ++idx[j - 1];
    for (std::size_t t = j; t < m; ++t) idx[t] = idx[t - 1] + 1;
  }
}

std::vector<std::uint32_t> merged(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::vector<std::uint32_t> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

SearchOutcome<RainbowEvenCover> find_rainbow_even_cover(const ColoredHypergraph& h, std::uint64_t budget) {
  require_well_formed(h);
  SearchOutcome<RainbowEvenCover> out;
  CoverSearch search(h, budget);
  for (std::size_t limit = 2; limit <= search.color_count(); ++limit) {
    bool reached = false;
    const Step s = search.search_size(limit, reached);
    out.nodes_expanded = search.nodes();
    if (s == Step::found) {
      out.status = SearchStatus::found;
      out.witness = RainbowEvenCover{search.chosen()};
      return out;
    }
    if (s == Step::out_of_budget) {
      out.status = SearchStatus::budget_exhausted;
      return out;
    }
    if (!reached) break;
  }
  out.status = SearchStatus::absent_proven;
  return out;
}

bool verify_even_cover(const ColoredHypergraph& h, const RainbowEvenCover& cover) {
  if (cover.edges.empty()) return false;
  std::vector<std::uint32_t> ids = cover.edges;
  std::vector<std::uint32_t> colors;
  BitRow acc(h.n);
  for (std::uint32_t id : ids) {
    if (id >= h.edges.size()) return false;
    colors.push_back(h.edges[id].color);
    for (std::uint32_t a : h.edges[id].vertices) {
      if (a >= h.n) return false;
      acc.flip(a);
    }
  }
  std::sort(ids.begin(), ids.end());
  std::sort(colors.begin(), colors.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) return false;
  if (std::adjacent_find(colors.begin(), colors.end()) != colors.end()) return false;
  return acc.is_zero();
}

std::uint64_t rank_subset(const std::vector<std::uint32_t>& sorted_subset) {
  std::uint64_t r = 0;
  for (std::size_t j = 0; j < sorted_subset.size(); ++j) r += binom(sorted_subset[j], j + 1);
  return r;
}

std::vector<std::uint32_t> unrank_subset(std::uint64_t rank, std::uint32_t ell) {
  std::vector<std::uint32_t> out(ell);
  for (std::uint32_t j = ell; j >= 1; --j) {
    // Largest s with C(s, j) <= rank.
    std::uint32_t s = j - 1;
    while (binom(s + 1, j) <= rank) ++s;
    out[j - 1] = s;
    rank -= binom(s, j);
  }
  return out;
}

DirectSumGraph direct_sum_graph(const ColoredHypergraph& h, std::uint32_t ell, std::uint64_t vertex_cap) {
  require_well_formed(h);
  std::size_t r = 0;
  if (!h.edges.empty()) {
    r = h.edges.front().vertices.size();
    for (const ColoredHyperedge& e : h.edges)
      if (e.vertices.size() != r) throw PreconditionError("direct_sum_graph needs a uniform hypergraph");
    if (r % 2 != 0) throw PreconditionError("direct_sum_graph needs even edge size");
    if (ell < r / 2) throw PreconditionError("direct_sum_graph needs ell >= r/2");
  }
  if (ell > h.n) throw PreconditionError("ell exceeds n");
  const std::uint64_t vertices = binom(h.n, ell);
  if (vertices > vertex_cap || vertices > UINT32_MAX)
    throw PreconditionError("C(n, ell) = " + std::to_string(vertices) + " exceeds the vertex cap " + std::to_string(vertex_cap));

  DirectSumGraph out;
  out.base_n = h.n;
  out.ell = ell;
  out.graph = ColoredGraph(static_cast<std::uint32_t>(vertices));

  struct Candidate {
    std::uint32_t a, b, color, source;
  };
  std::vector<Candidate> candidates;
  const std::size_t half = r / 2;
  for (std::uint32_t id = 0; id < h.edges.size(); ++id) {
    Hyperedge e = h.edges[id].vertices;
    std::sort(e.begin(), e.end());
    std::vector<std::uint32_t> rest(e.begin() + 1, e.end());
    std::vector<std::uint32_t> outside;
    for (std::uint32_t y = 0, p = 0; y < h.n; ++y) {
      if (p < e.size() && e[p] == y) {
        ++p;
        continue;
      }
      outside.push_back(y);
    }
    // One unordered split per pair: the first half holds min(E).
    for_each_combination(rest, half - 1, [&](const std::vector<std::uint32_t>& tail) {
      std::vector<std::uint32_t> first{e[0]};
      first.insert(first.end(), tail.begin(), tail.end());
      std::vector<std::uint32_t> second;
      std::set_difference(e.begin(), e.end(), first.begin(), first.end(), std::back_inserter(second));
      for_each_combination(outside, ell - half, [&](const std::vector<std::uint32_t>& s) {
        const auto a = static_cast<std::uint32_t>(rank_subset(merged(s, first)));
        const auto b = static_cast<std::uint32_t>(rank_subset(merged(s, second)));
        candidates.push_back({a, b, h.edges[id].color, id});
      });
    });
  }

  // Delete every edge sharing a (color, vertex) slot with another edge.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> slots;
  slots.reserve(candidates.size() * 2);
  for (const Candidate& c : candidates) {
    slots.emplace_back(c.color, c.a);
    slots.emplace_back(c.color, c.b);
  }
  std::sort(slots.begin(), slots.end());
  auto crowded = [&](std::uint32_t color, std::uint32_t v) {
    const auto range = std::equal_range(slots.begin(), slots.end(), std::make_pair(color, v));
    return range.second - range.first > 1;
  };
  for (const Candidate& c : candidates) {
    if (crowded(c.color, c.a) || crowded(c.color, c.b)) {
      ++out.deleted_edges;
      continue;
    }
    out.graph.add_edge(c.a, c.b, c.color);
    out.source.push_back(c.source);
  }
  return out;
}

RainbowEvenCover lift_cycle_to_cover(const RainbowCycle& cycle, const DirectSumGraph& dsg, const ColoredHypergraph& h) {
  RainbowEvenCover cover;
  for (std::uint32_t e : cycle.edges) {
    if (e >= dsg.source.size()) throw InvariantViolation("cycle edge outside the direct-sum graph");
    cover.edges.push_back(dsg.source[e]);
  }
  if (!verify_even_cover(h, cover)) throw InvariantViolation("lifted cycle is not a rainbow even cover");
  return cover;
}

}  // namespace lcc
