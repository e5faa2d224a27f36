#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lcc/instance.hpp"
#include "lcc/prime_field.hpp"
#include "lcc/rational.hpp"
#include "lcc/rng.hpp"

namespace lcc {

/// Matched partners of every row per message index, plus the measured
/// delta. Built once per instance; requires r = 2 and a valid instance.
class CouplingTable {
 public:
  explicit CouplingTable(const LdcInstance& ldc);

  struct Partner {
    std::uint32_t b;
    std::uint32_t alpha_a;  // coefficient of the queried row
    std::uint32_t alpha_b;
  };

  const LdcInstance& instance() const { return ldc_; }
  const PrimeField& field() const { return field_; }
  /// min_i |H_i| / n over all i in [0, k); a missing H_i counts as empty.
  const Rational& delta() const { return delta_; }
  std::optional<Partner> partner(std::uint32_t i, std::uint32_t a) const;

 private:
  const LdcInstance& ldc_;
  PrimeField field_;
  Rational delta_;
  std::vector<std::uint32_t> partner_;  // k * n, UINT32_MAX when unmatched
  std::vector<std::uint32_t> alpha_;    // coefficient of row a in its edge
};

/// One draw of the coupling chain on supp(x) = {i_1 < ... < i_w}.
/// gamma/a have w + 1 entries (t = 0..w); fired/beta/beta_prime have w.
struct CouplingTrace {
  std::vector<std::uint32_t> support;
  std::vector<std::uint32_t> beta;
  std::vector<std::uint32_t> gamma;
  std::vector<std::uint32_t> a;
  std::vector<char> fired;
  std::vector<std::uint32_t> beta_prime;

  std::size_t zeroed() const;
};

/// Samples (gamma_0, a_0) uniformly and runs the chain. Asserts the per-step
/// identity gamma_{t-1} v_{a_{t-1}} + beta_t e_{i_t} = beta'_t e_{i_t} + gamma_t v_{a_t}
/// and the telescoped identity (InvariantViolation on failure).
CouplingTrace sample_coupling(const CouplingTable& table, std::span<const std::uint32_t> x, Rng& rng);

struct ContractionStep {
  bool accepted = false;
  std::uint32_t a1 = 0, gamma1 = 0;  // x' = x + gamma1 v_{a1} + gamma2 v_{a2}
  std::uint32_t a2 = 0, gamma2 = 0;
  std::vector<std::uint32_t> x_next;
  std::size_t weight_before = 0;
  std::size_t weight_after = 0;
  std::size_t threshold = 0;  // largest accepted weight
  std::uint64_t draws = 0;
  CouplingTrace trace;
};

/// Largest accepted wt(x'): floor((1 - 2 delta / q) w) when that is below w,
/// else w - 1.
std::size_t contraction_threshold(std::size_t w, const Rational& delta, std::uint32_t q);

/// 64 * ceil(q / (2 delta)).
std::uint64_t default_retry_budget(const Rational& delta, std::uint32_t q);

/// Rejection-samples the chain until wt(x') <= threshold or retry_budget
/// draws are used (0 = default). On failure returns accepted = false with
/// the lowest-weight draw. Requires x != 0 and delta > 0.
ContractionStep contraction_step(const CouplingTable& table, std::span<const std::uint32_t> x, std::uint64_t seed,
                                 std::uint64_t retry_budget = 0);
ContractionStep contraction_step(const LdcInstance& ldc, std::span<const std::uint32_t> x, std::uint64_t seed,
                                 std::uint64_t retry_budget = 0);

class ContractionFailure : public std::runtime_error {
 public:
  ContractionFailure(const std::string& what, ContractionStep best) : std::runtime_error(what), best_(std::move(best)) {}
  const ContractionStep& best() const { return best_; }

 private:
  ContractionStep best_;
};

/// sum_j coeffs[j] v_{indices[j]} = x - residual.
struct SpanResult {
  std::vector<std::uint32_t> indices;
  std::vector<std::uint32_t> coeffs;
  std::vector<std::uint32_t> residual;
  std::size_t steps = 0;
  std::uint64_t retries_total = 0;
  std::vector<std::size_t> weights;  // wt of the residual before each step, then final
  bool verified = false;
};

/// Contract until the residual is zero. Throws ContractionFailure.
SpanResult sparse_span(const CouplingTable& table, std::span<const std::uint32_t> x, std::uint64_t seed,
                       std::uint64_t retry_budget = 0);
SpanResult sparse_span(const LdcInstance& ldc, std::span<const std::uint32_t> x, std::uint64_t seed,
                       std::uint64_t retry_budget = 0);

/// Contract until wt(residual) <= floor(k/4). Throws ContractionFailure.
SpanResult approx_span(const CouplingTable& table, std::span<const std::uint32_t> x, std::uint64_t seed,
                       std::uint64_t retry_budget = 0);
SpanResult approx_span(const LdcInstance& ldc, std::span<const std::uint32_t> x, std::uint64_t seed,
                       std::uint64_t retry_budget = 0);

/// Plain modular evaluation of sum_j coeffs[j] v_{indices[j]}.
std::vector<std::uint32_t> evaluate_combination(const LdcInstance& ldc, std::span<const std::uint32_t> indices,
                                                std::span<const std::uint32_t> coeffs);

/// h_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x). Throws
/// std::domain_error unless 0 < x < 1 and q >= 2.
double q_ary_entropy(double x, std::uint32_t q);

/// Uniform vector in F_q^k with seeded draws.
std::vector<std::uint32_t> random_fq_vector(std::uint32_t k, std::uint32_t q, std::uint64_t seed);

}  // namespace lcc
