#pragma once

#include <cstdint>
#include <span>

#include "lcc/colored_graph.hpp"
#include "lcc/instance.hpp"
#include "lcc/rational.hpp"

namespace lcc {

inline constexpr unsigned kDefaultPackingRetries = 32;

/// Hadamard code in combinatorial form: n = 2^k, row y is y itself, and H_i
/// is a seeded greedy packing of triples {a, b, a^b^i}. Each H_i is packed
/// as far as the greedy gets (best of `retries` shuffles); the declared delta
/// is target_delta.
///
/// Requires 2 <= k <= 20 and 0 < target_delta <= 1/4. Throws GenerationError
/// (achieved = smallest |H_i| reached) if some H_i stays below target_delta*n.
/// For k = 3 no packing exceeds one triple, so target_delta must be <= 1/8.
LccInstance gen_hadamard(std::uint32_t k, std::uint64_t seed, const Rational& target_delta,
                         unsigned retries = kDefaultPackingRetries);

/// Partial instance from parity checks: for every target i, per_target_edges
/// disjoint random triples E avoiding i give a check {i} u E; the rows are the
/// coordinates of a null-space basis of all checks, so every check becomes
/// an identity v_i = sum over E. k = n - rank(checks).
LccInstance gen_constraint_kernel(std::uint32_t n, std::span<const std::uint32_t> targets,
                                  std::uint32_t per_target_edges, std::uint64_t seed);

/// Hadamard 2-LDC over F_q: rows are all of F_q^k (index = base-q digits,
/// coordinate 0 least significant). H_i pairs y + t e_i with y + (t+1) e_i
/// for t = 0, 2, 4, ... so e_i = v_{y+(t+1)e_i} - v_{y+t e_i}. Requires q prime
/// and q^k <= 2^16; delta = floor(q/2)/q.
LdcInstance gen_hadamard_ldc(std::uint32_t k, std::uint32_t q);

/// Boolean hypercube on 2^d vertices, edge {y, y^e_j} colored j. 1 <= d <= 16.
ColoredGraph gen_hypercube_graph(std::uint32_t d);

/// Random properly colored multigraph: `attempts` random (u, v, color)
/// proposals, each kept iff neither endpoint already has that color.
ColoredGraph gen_random_proper_graph(std::uint32_t n, std::uint32_t attempts, std::uint32_t colors,
                                     std::uint64_t seed);

/// `colors` random r-uniform matchings on [0, n), each with `edges_per_color`
/// disjoint edges (r * edges_per_color <= n).
ColoredHypergraph gen_random_matchings(std::uint32_t n, std::uint32_t r, std::uint32_t colors,
                                       std::uint32_t edges_per_color, std::uint64_t seed);

}  // namespace lcc
