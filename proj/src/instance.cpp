#include "lcc/instance.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "lcc/errors.hpp"
#include "lcc/linalg.hpp"
#include "lcc/prime_field.hpp"

namespace lcc {

std::string format_edge(const Hyperedge& e) {
  std::string s = "[";
  for (std::size_t j = 0; j < e.size(); ++j) {
    if (j > 0) s += ",";
    s += std::to_string(e[j]);
  }
  return s + "]";
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* ValidationReport::find(const std::string& name) const {
  for (const CheckResult& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const CheckResult& c : checks) {
    os << (c.passed ? "pass " : "FAIL ") << c.name;
    if (!c.passed) os << ": " << c.counterexample;
    os << '\n';
  }
  return os.str();
}

namespace {

void check_edge_structure(const Hyperedge& e, std::uint32_t n, std::uint32_t owner) {
  std::vector<std::uint32_t> sorted = e;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    if (sorted[j] >= n)
      throw StructuralError("edge " + format_edge(e) + " of matching " + std::to_string(owner) + " has index >= n");
    if (j > 0 && sorted[j] == sorted[j - 1])
      throw StructuralError("edge " + format_edge(e) + " of matching " + std::to_string(owner) + " repeats an index");
  }
}

// Shared combinatorial checks over any owner -> edges map. LDC owners are
// message coordinates, not rows, so owner exclusion only applies to LCCs.
template <class MatchingMap>
void add_matching_checks(ValidationReport& report, const MatchingMap& matchings, std::uint32_t n, std::uint32_t r,
                         const Rational& delta, bool owner_is_row) {
  CheckResult uniform{check::kUniform, true, {}};
  CheckResult disjoint{check::kDisjoint, true, {}};
  CheckResult owner_excluded{check::kOwnerExcluded, true, {}};
  CheckResult size{check::kSize, true, {}};
  std::vector<std::uint32_t> seen(n, 0);
  std::uint32_t stamp = 0;
  for (const auto& [owner, m] : matchings) {
    ++stamp;
    for (const Hyperedge& e : m.edges) {
      if (uniform.passed && e.size() != r) {
        uniform.passed = false;
        uniform.counterexample = "i=" + std::to_string(owner) + " edge=" + format_edge(e) + " has size " +
                                 std::to_string(e.size()) + ", expected " + std::to_string(r);
      }
      for (std::uint32_t a : e) {
        if (owner_is_row && a == owner && owner_excluded.passed) {
          owner_excluded.passed = false;
          owner_excluded.counterexample = "i=" + std::to_string(owner) + " edge=" + format_edge(e) + " contains i";
        }
        if (seen[a] == stamp && disjoint.passed) {
          disjoint.passed = false;
          disjoint.counterexample =
              "i=" + std::to_string(owner) + " index " + std::to_string(a) + " appears in two edges, one is " + format_edge(e);
        }
        seen[a] = stamp;
      }
    }
    // |H_i| >= delta * n, exactly.
    const Rational have(static_cast<std::int64_t>(m.edges.size()), 1);
    if (size.passed && have < delta * static_cast<std::int64_t>(n)) {
      size.passed = false;
      size.counterexample = "i=" + std::to_string(owner) + " |H_i|=" + std::to_string(m.edges.size()) +
                            " < delta*n=" + format_rational(delta * static_cast<std::int64_t>(n));
    }
  }
  report.checks.push_back(std::move(uniform));
  report.checks.push_back(std::move(disjoint));
  if (owner_is_row) report.checks.push_back(std::move(owner_excluded));
  report.checks.push_back(std::move(size));
}

}  // namespace

void check_structure(const LccInstance& inst) {
  if (inst.n == 0) throw StructuralError("instance has n = 0");
  if (inst.k == 0) throw StructuralError("instance has k = 0");
  if (inst.r == 0) throw StructuralError("instance has r = 0");
  if (inst.rows.rows() != inst.n || inst.rows.dim() != inst.k)
    throw StructuralError("row matrix is " + std::to_string(inst.rows.rows()) + "x" + std::to_string(inst.rows.dim()) +
                          ", expected " + std::to_string(inst.n) + "x" + std::to_string(inst.k));
  for (const auto& [key, m] : inst.matchings) {
    if (key >= inst.n) throw StructuralError("matching key " + std::to_string(key) + " >= n");
    if (m.owner != key) throw StructuralError("matching stored under " + std::to_string(key) + " names another owner");
    for (const Hyperedge& e : m.edges) check_edge_structure(e, inst.n, key);
  }
}

void check_structure(const LdcInstance& inst) {
  if (inst.n == 0) throw StructuralError("instance has n = 0");
  if (inst.k == 0) throw StructuralError("instance has k = 0");
  if (inst.r == 0) throw StructuralError("instance has r = 0");
  if (!is_prime(inst.q) || inst.q > PrimeField::kMaxModulus) throw StructuralError("q must be a prime <= 65536");
  if (inst.rows.size() != std::size_t{inst.n} * inst.k) throw StructuralError("row data does not have n*k entries");
  for (std::uint32_t v : inst.rows)
    if (v >= inst.q) throw StructuralError("row entry out of range [0, q)");
  for (const auto& [key, m] : inst.matchings) {
    if (key >= inst.k) throw StructuralError("LDC matching key " + std::to_string(key) + " >= k");
    if (m.owner != key) throw StructuralError("matching stored under " + std::to_string(key) + " names another owner");
    if (m.coeffs.size() != m.edges.size())
      throw StructuralError("matching " + std::to_string(key) + " has coefficient lists not parallel to its edges");
    for (std::size_t e = 0; e < m.edges.size(); ++e) {
      check_edge_structure(m.edges[e], inst.n, key);
      if (m.coeffs[e].size() != m.edges[e].size())
        throw StructuralError("matching " + std::to_string(key) + " edge " + format_edge(m.edges[e]) +
                              " has a coefficient list of the wrong length");
      for (std::uint32_t c : m.coeffs[e])
        if (c >= inst.q) throw StructuralError("coefficient out of range [0, q)");
    }
  }
}

ValidationReport validate_lcc(const LccInstance& inst, bool strict) {
  check_structure(inst);
  ValidationReport report;
  add_matching_checks(report, inst.matchings, inst.n, inst.r, inst.delta, true);

  CheckResult identity{check::kIdentity, true, {}};
  for (const auto& [owner, m] : inst.matchings) {
    for (const Hyperedge& e : m.edges) {
      BitRow acc = inst.rows.row(owner);
      for (std::uint32_t a : e) inst.rows.xor_row_into(a, acc);
      if (!acc.is_zero()) {
        identity.passed = false;
        identity.counterexample = "i=" + std::to_string(owner) + " edge=" + format_edge(e) + ": v_i != sum of edge rows";
        break;
      }
    }
    if (!identity.passed) break;
  }
  report.checks.push_back(std::move(identity));

  const std::size_t rk = rank(inst.rows);
  CheckResult rank_check{check::kRank, rk == inst.k, {}};
  if (!rank_check.passed) rank_check.counterexample = "rank=" + std::to_string(rk) + " but k=" + std::to_string(inst.k);
  report.checks.push_back(std::move(rank_check));

  if (strict) {
    CheckResult coverage{check::kCoverage, true, {}};
    for (std::uint32_t i = 0; i < inst.n; ++i) {
      if (inst.matching_for(i) == nullptr) {
        coverage.passed = false;
        coverage.counterexample = "no matching for i=" + std::to_string(i);
        break;
      }
    }
    report.checks.push_back(std::move(coverage));
  }
  return report;
}

ValidationReport validate_ldc(const LdcInstance& inst) {
  check_structure(inst);
  ValidationReport report;
  add_matching_checks(report, inst.matchings, inst.n, inst.r, inst.delta, false);

  const PrimeField field(inst.q);
  CheckResult nonzero{check::kNonzero, true, {}};
  CheckResult identity{check::kIdentity, true, {}};
  std::vector<std::uint32_t> acc(inst.k);
  for (const auto& [owner, m] : inst.matchings) {
    for (std::size_t e = 0; e < m.edges.size(); ++e) {
      const Hyperedge& edge = m.edges[e];
      const auto& alpha = m.coeffs[e];
      if (nonzero.passed && std::find(alpha.begin(), alpha.end(), 0U) != alpha.end()) {
        nonzero.passed = false;
        nonzero.counterexample = "i=" + std::to_string(owner) + " edge=" + format_edge(edge) + " has a zero coefficient";
      }
      if (!identity.passed) continue;
      // e_i - sum_s alpha_s v_{a_s} must vanish.
      std::fill(acc.begin(), acc.end(), 0U);
      acc[owner] = 1;
      for (std::size_t s = 0; s < edge.size(); ++s) field.axpy(acc, field.neg(alpha[s]), inst.row(edge[s]));
      if (fq_weight(acc) != 0) {
        identity.passed = false;
        identity.counterexample = "i=" + std::to_string(owner) + " edge=" + format_edge(edge) + ": e_i != sum alpha_s v_{a_s}";
      }
    }
  }
  report.checks.push_back(std::move(nonzero));
  report.checks.push_back(std::move(identity));
  return report;
}

namespace {
template <class Inst>
Rational min_matching_fraction(const Inst& inst) {
  if (inst.matchings.empty()) throw std::domain_error("effective_delta of an instance without matchings");
  std::size_t smallest = SIZE_MAX;
  for (const auto& [owner, m] : inst.matchings) smallest = std::min(smallest, m.edges.size());
  return Rational(static_cast<std::int64_t>(smallest), static_cast<std::int64_t>(inst.n));
}
}  // namespace

Rational effective_delta(const LccInstance& inst) { return min_matching_fraction(inst); }
Rational effective_delta(const LdcInstance& inst) { return min_matching_fraction(inst); }

void canonicalize(LccInstance& inst) {
  for (auto& [owner, m] : inst.matchings) {
    for (Hyperedge& e : m.edges) std::sort(e.begin(), e.end());
    std::sort(m.edges.begin(), m.edges.end());
  }
}

void canonicalize(LdcInstance& inst) {
  for (auto& [owner, m] : inst.matchings) {
    const std::size_t count = m.edges.size();
    for (std::size_t e = 0; e < count; ++e) {
      std::vector<std::size_t> perm(m.edges[e].size());
      std::iota(perm.begin(), perm.end(), 0);
      std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return m.edges[e][a] < m.edges[e][b]; });
      Hyperedge edge;
      std::vector<std::uint32_t> alpha;
      for (std::size_t s : perm) {
        edge.push_back(m.edges[e][s]);
        if (e < m.coeffs.size() && s < m.coeffs[e].size()) alpha.push_back(m.coeffs[e][s]);
      }
      m.edges[e] = std::move(edge);
      if (e < m.coeffs.size()) m.coeffs[e] = std::move(alpha);
    }
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return m.edges[a] < m.edges[b]; });
    LdcMatching sorted{m.owner, {}, {}};
    for (std::size_t e : order) {
      sorted.edges.push_back(std::move(m.edges[e]));
      if (e < m.coeffs.size()) sorted.coeffs.push_back(std::move(m.coeffs[e]));
    }
    m = std::move(sorted);
  }
}

}  // namespace lcc
