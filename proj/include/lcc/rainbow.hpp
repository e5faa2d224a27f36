#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lcc/colored_graph.hpp"

namespace lcc {

inline constexpr std::uint64_t kDefaultSearchBudget = 1'000'000;

enum class SearchStatus { found, absent_proven, budget_exhausted };

std::string status_name(SearchStatus s);

/// Result of an exact search. absent_proven is only reported when the search
/// finished exhaustively; budget_exhausted is inconclusive.
template <class Witness>
struct SearchOutcome {
  SearchStatus status = SearchStatus::absent_proven;
  std::optional<Witness> witness;
  std::uint64_t nodes_expanded = 0;

  bool found() const { return status == SearchStatus::found; }
};

/// Closed walk vertices[0] -edges[0]- vertices[1] - ... -edges[m-1]- vertices[0].
/// Edge ids index into the searched graph.
struct RainbowCycle {
  std::vector<std::uint32_t> edges;
  std::vector<std::uint32_t> vertices;

  std::size_t length() const { return edges.size(); }
};

/// Exact rainbow-cycle search. A pair of parallel edges (necessarily of
/// distinct colors in a proper graph) is returned at once; otherwise
/// iterative deepening over the cycle length, rooting each cycle at its
/// smallest vertex and extending simple paths with unused colors, colors
/// ascending. `budget` caps node expansions over the whole call. The first
/// cycle found is a shortest one.
///
/// Throws PreconditionError if g is not properly colored.
SearchOutcome<RainbowCycle> find_rainbow_cycle(const ColoredGraph& g, std::uint64_t budget = kDefaultSearchBudget);

/// Edges exist, are distinct, have pairwise distinct colors, the walk is
/// closed and consistent with the vertex list, and the endpoint 2-sets XOR
/// to the empty set.
bool verify_rainbow_cycle(const ColoredGraph& g, const RainbowCycle& cycle);

}  // namespace lcc
