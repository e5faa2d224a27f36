#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lcc/bitrow.hpp"
#include "lcc/rational.hpp"

namespace lcc {

/// Strictly increasing 0-based positions.
using Hyperedge = std::vector<std::uint32_t>;

/// H_i: pairwise disjoint hyperedges recovering the owner index.
struct Matching {
  std::uint32_t owner = 0;
  std::vector<Hyperedge> edges;

  friend bool operator==(const Matching&, const Matching&) = default;
};

/// Binary linear code in combinatorial form: generator rows v_0..v_{n-1} in
/// F2^k and, for some (or all) targets i, an r-uniform matching whose edges
/// satisfy v_i = sum of v_a over the edge.
struct LccInstance {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::uint32_t r = 3;
  BitMatrix rows;
  std::map<std::uint32_t, Matching> matchings;
  Rational delta{0};

  const Matching* matching_for(std::uint32_t i) const {
    auto it = matchings.find(i);
    return it == matchings.end() ? nullptr : &it->second;
  }

  friend bool operator==(const LccInstance&, const LccInstance&) = default;
};

/// Matching for a message index together with its nonzero coefficients;
/// coeffs[e][s] multiplies row edges[e][s].
struct LdcMatching {
  std::uint32_t owner = 0;
  std::vector<Hyperedge> edges;
  std::vector<std::vector<std::uint32_t>> coeffs;

  friend bool operator==(const LdcMatching&, const LdcMatching&) = default;
};

/// Linear LDC over a prime field: rows v_0..v_{n-1} in F_q^k; for message
/// index i and edge E in H_i, e_i = sum_s alpha_s v_{a_s}.
struct LdcInstance {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::uint32_t r = 2;
  std::uint32_t q = 2;
  std::vector<std::uint32_t> rows;  // n * k residues, row-major
  std::map<std::uint32_t, LdcMatching> matchings;
  Rational delta{0};

  std::span<const std::uint32_t> row(std::uint32_t i) const { return {rows.data() + std::size_t{i} * k, k}; }

  const LdcMatching* matching_for(std::uint32_t i) const {
    auto it = matchings.find(i);
    return it == matchings.end() ? nullptr : &it->second;
  }

  friend bool operator==(const LdcInstance&, const LdcInstance&) = default;
};

namespace check {
inline constexpr const char* kUniform = "uniform";
inline constexpr const char* kDisjoint = "disjoint";
inline constexpr const char* kOwnerExcluded = "owner_excluded";
inline constexpr const char* kSize = "size";
inline constexpr const char* kIdentity = "identity";
inline constexpr const char* kRank = "rank";
inline constexpr const char* kCoverage = "coverage";
inline constexpr const char* kNonzero = "nonzero_coefficients";
}  // namespace check

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string counterexample;  // first failure, empty on pass
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
  std::string summary() const;
};

/// Throws StructuralError on malformed data: wrong row shape, matching key
/// out of range, owner/key mismatch, edge index out of range, repeated index
/// inside an edge, coefficient lists not parallel to edges.
void check_structure(const LccInstance& inst);
void check_structure(const LdcInstance& inst);

/// Checks: edges are r-sets, disjoint, avoid the owner; |H_i| >= delta*n;
/// every identity holds; rank(rows) = k. `strict` also demands a matching
/// for every i in [0, n).
ValidationReport validate_lcc(const LccInstance& inst, bool strict);
ValidationReport validate_ldc(const LdcInstance& inst);

/// min over present matchings of |H_i| / n. std::domain_error if none.
Rational effective_delta(const LccInstance& inst);
Rational effective_delta(const LdcInstance& inst);

/// Sorts each edge and each edge list (LDC coefficients follow their edges).
void canonicalize(LccInstance& inst);
void canonicalize(LdcInstance& inst);

std::string format_edge(const Hyperedge& e);

}  // namespace lcc
