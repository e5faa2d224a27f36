#include "lcc/rainbow.hpp"

#include <algorithm>
#include <tuple>

#include "lcc/errors.hpp"

namespace lcc {

std::string status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::found:
      return "Found";
    case SearchStatus::absent_proven:
      return "AbsentProven";
    case SearchStatus::budget_exhausted:
      return "BudgetExhausted";
  }
  return "?";
}

namespace {

struct Arc {
  std::uint32_t to;
  std::uint32_t color;  // dense id
  std::uint32_t edge;
};

enum class Step { none, found, out_of_budget };

class CycleSearch {
 public:
  CycleSearch(const ColoredGraph& g, std::uint64_t budget) : adj_(g.n), on_path_(g.n, 0), budget_(budget) {
    std::vector<std::uint32_t> colors;
    colors.reserve(g.edges.size());
    for (const ColoredEdge& e : g.edges) colors.push_back(e.color);
    std::sort(colors.begin(), colors.end());
    colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
    color_count_ = colors.size();
    used_.assign(colors.size(), 0);
    for (std::uint32_t id = 0; id < g.edges.size(); ++id) {
      const ColoredEdge& e = g.edges[id];
      const auto c = static_cast<std::uint32_t>(std::lower_bound(colors.begin(), colors.end(), e.color) - colors.begin());
      adj_[e.u].push_back({e.v, c, id});
      adj_[e.v].push_back({e.u, c, id});
    }
    for (auto& list : adj_)
      std::sort(list.begin(), list.end(),
                [](const Arc& a, const Arc& b) { return std::tie(a.color, a.to, a.edge) < std::tie(b.color, b.to, b.edge); });
  }

  std::size_t color_count() const { return color_count_; }
  std::uint64_t nodes() const { return nodes_; }

  /// Searches cycles of exactly `length` edges. `reached` reports whether any
  /// path got long enough that a longer cycle could still exist.
  Step search_length(std::uint32_t length, bool& reached) {
    limit_ = length;
    reached_ = false;
    for (root_ = 0; root_ < adj_.size(); ++root_) {
      on_path_[root_] = 1;
      path_vertices_.assign(1, root_);
      path_edges_.clear();
      const Step s = extend(root_, 0);
      on_path_[root_] = 0;
      if (s != Step::none) {
        reached = reached_;
        return s;
      }
    }
    reached = reached_;
    return Step::none;
  }

  RainbowCycle witness() const { return {path_edges_, path_vertices_}; }

 private:
  Step extend(std::uint32_t v, std::uint32_t depth) {
    if (nodes_ >= budget_) return Step::out_of_budget;
    ++nodes_;
    if (depth + 1 == limit_) {
      reached_ = true;
      for (const Arc& a : adj_[v]) {
        if (a.to == root_ && !used_[a.color]) {
          path_edges_.push_back(a.edge);
          return Step::found;
        }
      }
      return Step::none;
    }
    for (const Arc& a : adj_[v]) {
      if (a.to <= root_ || on_path_[a.to] || used_[a.color]) continue;
      on_path_[a.to] = 1;
      used_[a.color] = 1;
      path_vertices_.push_back(a.to);
      path_edges_.push_back(a.edge);
      const Step s = extend(a.to, depth + 1);
      if (s != Step::none) return s;
      path_vertices_.pop_back();
      path_edges_.pop_back();
      used_[a.color] = 0;
      on_path_[a.to] = 0;
    }
    return Step::none;
  }

  std::vector<std::vector<Arc>> adj_;
  std::vector<char> on_path_;
  std::vector<char> used_;
  std::size_t color_count_ = 0;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::uint32_t root_ = 0;
  std::uint32_t limit_ = 0;
  bool reached_ = false;
  std::vector<std::uint32_t> path_vertices_;
  std::vector<std::uint32_t> path_edges_;
};

}  // namespace

SearchOutcome<RainbowCycle> find_rainbow_cycle(const ColoredGraph& g, std::uint64_t budget) {
  if (!check_proper(g)) throw PreconditionError("find_rainbow_cycle needs a properly colored graph");
  for (const ColoredEdge& e : g.edges)
    if (e.u == e.v || e.u >= g.n || e.v >= g.n) throw PreconditionError("graph has a self-loop or an endpoint >= n");

  SearchOutcome<RainbowCycle> out;

  // Length 2: parallel edges. Properness forces their colors to differ.
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(g.edges.size());
  for (std::uint32_t id = 0; id < g.edges.size(); ++id) {
    const ColoredEdge& e = g.edges[id];
    pairs.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v), id);
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t p = 1; p < pairs.size(); ++p) {
    const auto [u0, v0, id0] = pairs[p - 1];
    const auto [u1, v1, id1] = pairs[p];
    if (u0 == u1 && v0 == v1) {
      out.status = SearchStatus::found;
      out.witness = RainbowCycle{{id0, id1}, {u0, v0}};
      return out;
    }
  }

  CycleSearch search(g, budget);
  const std::size_t max_length = std::min<std::size_t>(g.n, search.color_count());
  for (std::uint32_t length = 3; length <= max_length; ++length) {
    bool reached = false;
    const Step s = search.search_length(length, reached);
    out.nodes_expanded = search.nodes();
    if (s == Step::found) {
      out.status = SearchStatus::found;
      out.witness = search.witness();
      return out;
    }
    if (s == Step::out_of_budget) {
      out.status = SearchStatus::budget_exhausted;
      return out;
    }
    if (!reached) break;  // no rainbow path long enough for any longer cycle
  }
  out.status = SearchStatus::absent_proven;
  return out;
}

bool verify_rainbow_cycle(const ColoredGraph& g, const RainbowCycle& cycle) {
  const std::size_t m = cycle.edges.size();
  if (m < 2 || cycle.vertices.size() != m) return false;
  std::vector<std::uint32_t> ids = cycle.edges;
  std::vector<std::uint32_t> colors;
  for (std::uint32_t id : ids) {
    if (id >= g.edges.size()) return false;
    colors.push_back(g.edges[id].color);
  }
  std::sort(ids.begin(), ids.end());
  std::sort(colors.begin(), colors.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) return false;
  if (std::adjacent_find(colors.begin(), colors.end()) != colors.end()) return false;

  std::vector<std::uint32_t> endpoints;
  for (std::size_t s = 0; s < m; ++s) {
    const ColoredEdge& e = g.edges[cycle.edges[s]];
    const std::uint32_t a = cycle.vertices[s];
    const std::uint32_t b = cycle.vertices[(s + 1) % m];
    if (!((e.u == a && e.v == b) || (e.u == b && e.v == a))) return false;
    endpoints.push_back(e.u);
    endpoints.push_back(e.v);
  }
  // Symmetric difference of the 2-sets is empty iff every vertex occurs evenly.
  std::sort(endpoints.begin(), endpoints.end());
  for (std::size_t p = 0; p < endpoints.size();) {
    std::size_t q = p;
    while (q < endpoints.size() && endpoints[q] == endpoints[p]) ++q;
    if ((q - p) % 2 != 0) return false;
    p = q;
  }
  return true;
}

}  // namespace lcc
