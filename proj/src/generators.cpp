#include "lcc/generators.hpp"

#include <algorithm>
#include <numeric>

#include "lcc/errors.hpp"
#include "lcc/linalg.hpp"
#include "lcc/prime_field.hpp"
#include "lcc/rng.hpp"

namespace lcc {

namespace {

constexpr std::uint32_t kNotInPool = UINT32_MAX;
constexpr std::size_t kPartnerTries = 64;

// Unused vertices with O(1) membership and removal.
class Pool {
 public:
  Pool(std::uint32_t n, std::uint32_t excluded, Rng& rng) : pos_(n, kNotInPool) {
    items_.reserve(n);
    for (std::uint32_t y = 0; y < n; ++y)
      if (y != excluded) items_.push_back(y);
    rng.shuffle(std::span<std::uint32_t>(items_));
    for (std::uint32_t p = 0; p < items_.size(); ++p) pos_[items_[p]] = p;
  }

  std::size_t size() const { return items_.size(); }
  bool contains(std::uint32_t y) const { return pos_[y] != kNotInPool; }
  std::uint32_t at(std::size_t p) const { return items_[p]; }

  void remove(std::uint32_t y) {
    const std::uint32_t p = pos_[y];
    const std::uint32_t last = items_.back();
    items_[p] = last;
    pos_[last] = p;
    items_.pop_back();
    pos_[y] = kNotInPool;
  }

 private:
  std::vector<std::uint32_t> items_;
  std::vector<std::uint32_t> pos_;
};

std::vector<Hyperedge> pack_hadamard_matching(std::uint32_t n, std::uint32_t i, Rng& rng) {
  Pool pool(n, i, rng);
  std::vector<Hyperedge> edges;
  while (pool.size() >= 3) {
    const std::uint32_t a = pool.at(pool.size() - 1);
    pool.remove(a);
    const std::size_t tries = std::min(pool.size(), kPartnerTries);
    const std::size_t offset = rng.below(pool.size());
    for (std::size_t t = 0; t < tries; ++t) {
      const std::uint32_t b = pool.at((offset + t) % pool.size());
      const std::uint32_t c = a ^ b ^ i;
      // b != i and a != i, so c differs from a, b and i.
      if (!pool.contains(c)) continue;
      pool.remove(b);
      pool.remove(c);
      Hyperedge e{a, b, c};
      std::sort(e.begin(), e.end());
      edges.push_back(std::move(e));
      break;
    }
  }
  return edges;
}

}  // namespace

LccInstance gen_hadamard(std::uint32_t k, std::uint64_t seed, const Rational& target_delta, unsigned retries) {
  if (k < 2 || k > 20) throw PreconditionError("gen_hadamard needs 2 <= k <= 20");
  if (target_delta <= 0 || target_delta > Rational(1, 4)) throw PreconditionError("gen_hadamard needs 0 < target_delta <= 1/4");
  if (retries == 0) throw PreconditionError("gen_hadamard needs at least one packing attempt");

  LccInstance inst;
  inst.k = k;
  inst.n = 1U << k;
  inst.r = 3;
  inst.delta = target_delta;
  inst.rows = BitMatrix(inst.n, k);
  for (std::uint32_t y = 0; y < inst.n; ++y) inst.rows.row_words(y)[0] = y;

  const std::size_t target = static_cast<std::size_t>(ceil_times(target_delta, inst.n));
  const std::uint64_t packing_seed = derive_seed(seed, stream::kPacking);
  for (std::uint32_t i = 0; i < inst.n; ++i) {
    const std::uint64_t index_seed = derive_seed(packing_seed, i);
    std::vector<Hyperedge> best;
    for (unsigned attempt = 0; attempt < retries && best.size() < target; ++attempt) {
      Rng rng(derive_seed(index_seed, attempt));
      std::vector<Hyperedge> edges = pack_hadamard_matching(inst.n, i, rng);
      if (edges.size() > best.size()) best = std::move(edges);
    }
    if (best.size() < target)
      throw GenerationError("gen_hadamard(k=" + std::to_string(k) + "): H_" + std::to_string(i) + " reached " +
                                std::to_string(best.size()) + " triples, target " + std::to_string(target),
                            best.size());
    std::sort(best.begin(), best.end());
    inst.matchings[i] = Matching{i, std::move(best)};
  }
  return inst;
}

LccInstance gen_constraint_kernel(std::uint32_t n, std::span<const std::uint32_t> targets,
                                  std::uint32_t per_target_edges, std::uint64_t seed) {
  if (n == 0) throw PreconditionError("gen_constraint_kernel needs n >= 1");
  if (per_target_edges > 0 && (n < 4 || std::uint64_t{3} * per_target_edges > n - 1))
    throw PreconditionError("per_target_edges disjoint triples avoiding a target do not fit in n - 1 indices");
  std::vector<std::uint32_t> sorted_targets(targets.begin(), targets.end());
  std::sort(sorted_targets.begin(), sorted_targets.end());
  if (std::adjacent_find(sorted_targets.begin(), sorted_targets.end()) != sorted_targets.end())
    throw PreconditionError("targets must be distinct");
  if (!sorted_targets.empty() && sorted_targets.back() >= n) throw PreconditionError("target index >= n");

  std::map<std::uint32_t, Matching> matchings;
  std::vector<Hyperedge> checks;
  if (per_target_edges > 0) {
    const std::uint64_t packing_seed = derive_seed(seed, stream::kPacking);
    for (std::uint32_t i : sorted_targets) {
      Rng rng(derive_seed(packing_seed, i));
      std::vector<std::uint32_t> pool;
      pool.reserve(n - 1);
      for (std::uint32_t y = 0; y < n; ++y)
        if (y != i) pool.push_back(y);
      rng.shuffle(std::span<std::uint32_t>(pool));
      Matching m{i, {}};
      for (std::uint32_t e = 0; e < per_target_edges; ++e) {
        Hyperedge edge(pool.begin() + 3 * e, pool.begin() + 3 * e + 3);
        std::sort(edge.begin(), edge.end());
        Hyperedge check = edge;
        check.push_back(i);
        checks.push_back(std::move(check));
        m.edges.push_back(std::move(edge));
      }
      std::sort(m.edges.begin(), m.edges.end());
      matchings[i] = std::move(m);
    }
  }

  // Null space of the check matrix A = left kernel of its transpose.
  BitMatrix checks_t(n, checks.size());
  for (std::size_t c = 0; c < checks.size(); ++c)
    for (std::uint32_t a : checks[c]) checks_t.set(a, c);
  const std::vector<BitRow> basis = kernel_basis(checks_t);
  if (basis.empty()) throw GenerationError("constraint kernel has dimension 0", 0);

  LccInstance inst;
  inst.n = n;
  inst.k = static_cast<std::uint32_t>(basis.size());
  inst.r = 3;
  inst.rows = BitMatrix(n, inst.k);
  for (std::uint32_t j = 0; j < inst.k; ++j)
    for (std::uint32_t i : basis[j].support()) inst.rows.set(i, j);
  inst.matchings = std::move(matchings);
  inst.delta = Rational(std::int64_t{per_target_edges}, std::int64_t{n});
  return inst;
}

LdcInstance gen_hadamard_ldc(std::uint32_t k, std::uint32_t q) {
  const PrimeField field(q);
  if (k == 0) throw PreconditionError("gen_hadamard_ldc needs k >= 1");
  std::uint64_t n = 1;
  for (std::uint32_t c = 0; c < k; ++c) {
    n *= q;
    if (n > (1U << 16)) throw PreconditionError("gen_hadamard_ldc: q^k exceeds 65536 rows");
  }

  LdcInstance inst;
  inst.n = static_cast<std::uint32_t>(n);
  inst.k = k;
  inst.r = 2;
  inst.q = q;
  inst.delta = Rational(std::int64_t{q / 2}, std::int64_t{q});
  inst.rows.resize(n * k);
  for (std::uint32_t y = 0; y < inst.n; ++y) {
    std::uint32_t rest = y;
    for (std::uint32_t c = 0; c < k; ++c) {
      inst.rows[std::size_t{y} * k + c] = rest % q;
      rest /= q;
    }
  }

  std::uint32_t stride = 1;
  for (std::uint32_t i = 0; i < k; ++i, stride *= q) {
    LdcMatching m{i, {}, {}};
    for (std::uint32_t y = 0; y < inst.n; ++y) {
      if ((y / stride) % q != 0) continue;
      for (std::uint32_t t = 0; t + 1 < q; t += 2) {
        const std::uint32_t lo = y + t * stride;
        m.edges.push_back({lo, lo + stride});
        m.coeffs.push_back({field.neg(1), 1});
      }
    }
    inst.matchings[i] = std::move(m);
  }
  canonicalize(inst);
  return inst;
}

ColoredGraph gen_hypercube_graph(std::uint32_t d) {
  if (d < 1 || d > 16) throw PreconditionError("gen_hypercube_graph needs 1 <= d <= 16");
  ColoredGraph g(1U << d);
  for (std::uint32_t y = 0; y < g.n; ++y)
    for (std::uint32_t j = 0; j < d; ++j)
      if (((y >> j) & 1U) == 0) g.add_edge(y, y ^ (1U << j), j);
  return g;
}

ColoredGraph gen_random_proper_graph(std::uint32_t n, std::uint32_t attempts, std::uint32_t colors,
                                     std::uint64_t seed) {
  if (n < 2 || colors == 0) throw PreconditionError("random graph needs n >= 2 and at least one color");
  Rng rng(seed);
  ColoredGraph g(n);
  std::vector<char> busy(std::size_t{n} * colors, 0);
  for (std::uint32_t t = 0; t < attempts; ++t) {
    const auto u = static_cast<std::uint32_t>(rng.below(n));
    const auto v = static_cast<std::uint32_t>(rng.below(n));
    const auto c = static_cast<std::uint32_t>(rng.below(colors));
    if (u == v || busy[std::size_t{c} * n + u] || busy[std::size_t{c} * n + v]) continue;
    busy[std::size_t{c} * n + u] = busy[std::size_t{c} * n + v] = 1;
    g.add_edge(u, v, c);
  }
  return g;
}

ColoredHypergraph gen_random_matchings(std::uint32_t n, std::uint32_t r, std::uint32_t colors,
                                       std::uint32_t edges_per_color, std::uint64_t seed) {
  if (r == 0) throw PreconditionError("random matchings need r >= 1");
  if (std::uint64_t{r} * edges_per_color > n) throw PreconditionError("r * edges_per_color exceeds n");
  Rng rng(seed);
  ColoredHypergraph h(n);
  std::vector<std::uint32_t> pool(n);
  for (std::uint32_t c = 0; c < colors; ++c) {
    std::iota(pool.begin(), pool.end(), 0U);
    rng.shuffle(std::span<std::uint32_t>(pool));
    for (std::uint32_t e = 0; e < edges_per_color; ++e)
      h.add_edge(Hyperedge(pool.begin() + std::size_t{e} * r, pool.begin() + std::size_t{e + 1} * r), c);
  }
  return h;
}

}  // namespace lcc
