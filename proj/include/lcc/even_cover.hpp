#pragma once

#include <cstdint>
#include <vector>

#include "lcc/colored_graph.hpp"
#include "lcc/rainbow.hpp"

namespace lcc {

/// Nonempty set of hyperedge ids (into a ColoredHypergraph), at most one per
/// color, whose symmetric difference is empty.
struct RainbowEvenCover {
  std::vector<std::uint32_t> edges;
};

/// Exact search. The cover's smallest vertex u lies in a root edge; every
/// further step picks an edge through the smallest vertex of the running
/// symmetric difference, with vertices >= u and an unused color. Iterative
/// deepening over the number of edges, colors ascending.
///
/// Throws PreconditionError unless every color class is a matching.
SearchOutcome<RainbowEvenCover> find_rainbow_even_cover(const ColoredHypergraph& h,
                                                        std::uint64_t budget = kDefaultSearchBudget);

bool verify_even_cover(const ColoredHypergraph& h, const RainbowEvenCover& cover);

inline constexpr std::uint64_t kDirectSumVertexCap = 1'000'000;

/// Graph on the l-subsets of [0, n) (vertex id = colex rank) with an edge
/// {A, B} colored i whenever A xor B is a hyperedge of color i, after
/// deleting every edge that touches another edge of its own color.
struct DirectSumGraph {
  std::uint32_t base_n = 0;
  std::uint32_t ell = 0;
  ColoredGraph graph;
  std::vector<std::uint32_t> source;  // graph edge -> hyperedge id
  std::size_t deleted_edges = 0;
};

/// Requires every hyperedge to have the same even size r, ell >= r/2 and
/// C(n, ell) <= vertex_cap (PreconditionError otherwise).
DirectSumGraph direct_sum_graph(const ColoredHypergraph& h, std::uint32_t ell,
                                std::uint64_t vertex_cap = kDirectSumVertexCap);

/// Subset with the given colex rank.
std::vector<std::uint32_t> unrank_subset(std::uint64_t rank, std::uint32_t ell);
std::uint64_t rank_subset(const std::vector<std::uint32_t>& sorted_subset);

/// Hyperedges behind the cycle's edges. Throws InvariantViolation if they do
/// not form a rainbow even cover.
RainbowEvenCover lift_cycle_to_cover(const RainbowCycle& cycle, const DirectSumGraph& dsg, const ColoredHypergraph& h);

}  // namespace lcc
