#include "lcc/ldc_coupling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lcc/errors.hpp"

namespace lcc {

namespace {
constexpr std::uint32_t kUnmatched = UINT32_MAX;
}

CouplingTable::CouplingTable(const LdcInstance& ldc) : ldc_(ldc), field_(ldc.q) {
  if (ldc.r != 2) throw PreconditionError("the coupling step needs a 2-query instance (r = 2)");
  const ValidationReport report = validate_ldc(ldc);
  if (!report.passed()) throw PreconditionError("LDC instance fails validation:\n" + report.summary());

  partner_.assign(std::size_t{ldc.k} * ldc.n, kUnmatched);
  alpha_.assign(std::size_t{ldc.k} * ldc.n, 0);
  std::size_t smallest = SIZE_MAX;
  for (std::uint32_t i = 0; i < ldc.k; ++i) {
    const LdcMatching* m = ldc.matching_for(i);
    smallest = std::min<std::size_t>(smallest, m == nullptr ? 0 : m->edges.size());
    if (m == nullptr) continue;
    for (std::size_t e = 0; e < m->edges.size(); ++e) {
      const auto& edge = m->edges[e];
      const auto& coeffs = m->coeffs[e];
      for (int s = 0; s < 2; ++s) {
        partner_[std::size_t{i} * ldc.n + edge[s]] = edge[1 - s];
        alpha_[std::size_t{i} * ldc.n + edge[s]] = coeffs[s];
      }
    }
  }
  delta_ = Rational(static_cast<std::int64_t>(smallest), static_cast<std::int64_t>(ldc.n));
}

std::optional<CouplingTable::Partner> CouplingTable::partner(std::uint32_t i, std::uint32_t a) const {
  const std::size_t slot = std::size_t{i} * ldc_.n + a;
  const std::uint32_t b = partner_[slot];
  if (b == kUnmatched) return std::nullopt;
  return Partner{b, alpha_[slot], alpha_[std::size_t{i} * ldc_.n + b]};
}

std::size_t CouplingTrace::zeroed() const {
  return static_cast<std::size_t>(std::count(beta_prime.begin(), beta_prime.end(), 0U));
}

namespace {

void check_vector(const LdcInstance& ldc, std::span<const std::uint32_t> x) {
  if (x.size() != ldc.k) throw PreconditionError("x has " + std::to_string(x.size()) + " coordinates, expected k");
  for (std::uint32_t v : x)
    if (v >= ldc.q) throw PreconditionError("x has an entry outside [0, q)");
}

// acc += c * v_a
void add_row(const CouplingTable& table, std::vector<std::uint32_t>& acc, std::uint32_t c, std::uint32_t a) {
  table.field().axpy(acc, c, table.instance().row(a));
}

}  // namespace

CouplingTrace sample_coupling(const CouplingTable& table, std::span<const std::uint32_t> x, Rng& rng) {
  const LdcInstance& ldc = table.instance();
  const PrimeField& f = table.field();
  CouplingTrace tr;
  for (std::uint32_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0) {
      tr.support.push_back(i);
      tr.beta.push_back(x[i]);
    }
  }
  tr.gamma.push_back(1 + static_cast<std::uint32_t>(rng.below(ldc.q - 1)));
  tr.a.push_back(static_cast<std::uint32_t>(rng.below(ldc.n)));

  std::vector<std::uint32_t> lhs(ldc.k);
  std::vector<std::uint32_t> rhs(ldc.k);
  for (std::size_t t = 0; t < tr.support.size(); ++t) {
    const std::uint32_t i = tr.support[t];
    const std::uint32_t g = tr.gamma.back();
    const std::uint32_t a = tr.a.back();
    const auto p = table.partner(i, a);
    std::uint32_t g_next = g, a_next = a, bp = tr.beta[t];
    if (p) {
      const std::uint32_t scale = f.mul(g, f.inv(p->alpha_a));  // gamma_{t-1} (alpha_a)^-1
      g_next = f.neg(f.mul(scale, p->alpha_b));
      a_next = p->b;
      bp = f.add(tr.beta[t], scale);
    }
    tr.fired.push_back(p ? 1 : 0);
    tr.gamma.push_back(g_next);
    tr.a.push_back(a_next);
    tr.beta_prime.push_back(bp);

    std::fill(lhs.begin(), lhs.end(), 0U);
    std::fill(rhs.begin(), rhs.end(), 0U);
    add_row(table, lhs, g, a);
    lhs[i] = f.add(lhs[i], tr.beta[t]);
    add_row(table, rhs, g_next, a_next);
    rhs[i] = f.add(rhs[i], bp);
    if (lhs != rhs) throw InvariantViolation("coupling chain identity fails at step " + std::to_string(t + 1));
  }

  // x + gamma_0 v_{a_0} - gamma_w v_{a_w} = sum beta'_t e_{i_t}
  std::vector<std::uint32_t> left(x.begin(), x.end());
  add_row(table, left, tr.gamma.front(), tr.a.front());
  add_row(table, left, f.neg(tr.gamma.back()), tr.a.back());
  std::vector<std::uint32_t> right(ldc.k, 0);
  for (std::size_t t = 0; t < tr.support.size(); ++t) right[tr.support[t]] = tr.beta_prime[t];
  if (left != right) throw InvariantViolation("telescoped coupling identity fails");
  return tr;
}

std::size_t contraction_threshold(std::size_t w, const Rational& delta, std::uint32_t q) {
  if (w == 0) return 0;
  Rational factor = Rational(1) - Rational(2) * delta / static_cast<std::int64_t>(q);
  if (factor < 0) factor = 0;
  const auto floor_value = static_cast<std::size_t>(floor_times(factor, static_cast<std::int64_t>(w)));
  return std::min(floor_value, w - 1);
}

std::uint64_t default_retry_budget(const Rational& delta, std::uint32_t q) {
  if (delta <= 0) throw PreconditionError("retry budget needs delta > 0");
  const Rational ratio = Rational(static_cast<std::int64_t>(q)) / (Rational(2) * delta);
  return 64 * static_cast<std::uint64_t>(ceil_times(ratio, 1));
}

ContractionStep contraction_step(const CouplingTable& table, std::span<const std::uint32_t> x, std::uint64_t seed,
                                 std::uint64_t retry_budget) {
  const LdcInstance& ldc = table.instance();
  check_vector(ldc, x);
  const std::size_t w = fq_weight(x);
  if (w == 0) throw PreconditionError("contraction_step needs x != 0");
  if (table.delta() <= 0) throw PreconditionError("effective delta is 0; some message index has no matching");
  if (retry_budget == 0) retry_budget = default_retry_budget(table.delta(), ldc.q);

  const PrimeField& f = table.field();
  Rng rng(derive_seed(seed, stream::kCoupling));
  ContractionStep best;
  best.weight_before = w;
  best.threshold = contraction_threshold(w, table.delta(), ldc.q);
  best.weight_after = SIZE_MAX;
  for (std::uint64_t draw = 1; draw <= retry_budget; ++draw) {
    CouplingTrace tr = sample_coupling(table, x, rng);
    const std::size_t wt = w - tr.zeroed();
    if (wt < best.weight_after) {
      best.weight_after = wt;
      best.a1 = tr.a.front();
      best.gamma1 = tr.gamma.front();
      best.a2 = tr.a.back();
      best.gamma2 = f.neg(tr.gamma.back());
      best.x_next.assign(ldc.k, 0);
      for (std::size_t t = 0; t < tr.support.size(); ++t) best.x_next[tr.support[t]] = tr.beta_prime[t];
      best.trace = std::move(tr);
    }
    best.draws = draw;
    if (best.weight_after <= best.threshold) {
      best.accepted = true;
      break;
    }
  }
  return best;
}

ContractionStep contraction_step(const LdcInstance& ldc, std::span<const std::uint32_t> x, std::uint64_t seed,
                                 std::uint64_t retry_budget) {
  return contraction_step(CouplingTable(ldc), x, seed, retry_budget);
}

std::vector<std::uint32_t> evaluate_combination(const LdcInstance& ldc, std::span<const std::uint32_t> indices,
                                                std::span<const std::uint32_t> coeffs) {
  if (indices.size() != coeffs.size()) throw PreconditionError("indices and coefficients differ in length");
  std::vector<std::uint64_t> acc(ldc.k, 0);
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] >= ldc.n) throw PreconditionError("row index >= n");
    const auto row = ldc.row(indices[j]);
    for (std::uint32_t c = 0; c < ldc.k; ++c) acc[c] = (acc[c] + std::uint64_t{coeffs[j]} * row[c]) % ldc.q;
  }
  return {acc.begin(), acc.end()};
}

namespace {

SpanResult run_span(const CouplingTable& table, std::span<const std::uint32_t> x, std::uint64_t seed,
                    std::uint64_t retry_budget, std::size_t stop_weight) {
  const LdcInstance& ldc = table.instance();
  check_vector(ldc, x);
  const PrimeField& f = table.field();
  SpanResult out;
  out.residual.assign(x.begin(), x.end());
  std::map<std::uint32_t, std::uint32_t> coeff;  // x - residual = sum coeff[a] v_a
  const std::uint64_t round_seed = derive_seed(seed, stream::kRound);
  std::size_t w = fq_weight(out.residual);
  while (w > stop_weight) {
    out.weights.push_back(w);
    ContractionStep step = contraction_step(table, out.residual, derive_seed(round_seed, out.steps), retry_budget);
    out.retries_total += step.draws;
    if (!step.accepted)
      throw ContractionFailure("contraction step " + std::to_string(out.steps + 1) + " failed after " +
                                   std::to_string(step.draws) + " draws (best weight " +
                                   std::to_string(step.weight_after) + " of " + std::to_string(w) + ")",
                               std::move(step));
    // residual' = residual + g1 v_a1 + g2 v_a2, so the combination gains -g1, -g2.
    coeff[step.a1] = f.sub(coeff[step.a1], step.gamma1);
    coeff[step.a2] = f.sub(coeff[step.a2], step.gamma2);
    out.residual = std::move(step.x_next);
    ++out.steps;
    w = fq_weight(out.residual);
  }
  out.weights.push_back(w);
  for (const auto& [a, c] : coeff) {
    if (c == 0) continue;
    out.indices.push_back(a);
    out.coeffs.push_back(c);
  }
  // Independent check: evaluation plus residual gives back x.
  std::vector<std::uint32_t> sum = evaluate_combination(ldc, out.indices, out.coeffs);
  for (std::uint32_t c = 0; c < ldc.k; ++c) sum[c] = (sum[c] + out.residual[c]) % ldc.q;
  out.verified = std::equal(sum.begin(), sum.end(), x.begin(), x.end());
  if (!out.verified) throw InvariantViolation("span result does not reconstruct x");
  return out;
}

}  // namespace

SpanResult sparse_span(const CouplingTable& table, std::span<const std::uint32_t> x, std::uint64_t seed,
                       std::uint64_t retry_budget) {
  return run_span(table, x, seed, retry_budget, 0);
}

SpanResult sparse_span(const LdcInstance& ldc, std::span<const std::uint32_t> x, std::uint64_t seed,
                       std::uint64_t retry_budget) {
  return sparse_span(CouplingTable(ldc), x, seed, retry_budget);
}

SpanResult approx_span(const CouplingTable& table, std::span<const std::uint32_t> x, std::uint64_t seed,
                       std::uint64_t retry_budget) {
  return run_span(table, x, seed, retry_budget, table.instance().k / 4);
}

SpanResult approx_span(const LdcInstance& ldc, std::span<const std::uint32_t> x, std::uint64_t seed,
                       std::uint64_t retry_budget) {
  return approx_span(CouplingTable(ldc), x, seed, retry_budget);
}

double q_ary_entropy(double x, std::uint32_t q) {
  if (!(x > 0.0 && x < 1.0)) throw std::domain_error("q_ary_entropy needs 0 < x < 1");
  if (q < 2) throw std::domain_error("q_ary_entropy needs q >= 2");
  const double lq = std::log(static_cast<double>(q));
  return (x * std::log(static_cast<double>(q - 1)) - x * std::log(x) - (1.0 - x) * std::log(1.0 - x)) / lq;
}

std::vector<std::uint32_t> random_fq_vector(std::uint32_t k, std::uint32_t q, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::uint32_t> v(k);
  for (std::uint32_t& c : v) c = static_cast<std::uint32_t>(rng.below(q));
  return v;
}

}  // namespace lcc
