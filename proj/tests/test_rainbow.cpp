#include <doctest.h>

#include "lcc/errors.hpp"
#include "lcc/even_cover.hpp"
#include "lcc/generators.hpp"
#include "lcc/rainbow.hpp"
#include "lcc/rng.hpp"
#include "oracles.hpp"

using namespace lcc;

namespace {

ColoredGraph graph_of(std::uint32_t n, std::initializer_list<ColoredEdge> edges) {
  ColoredGraph g(n);
  for (const auto& e : edges) g.add_edge(e.u, e.v, e.color);
  return g;
}

}  // namespace

TEST_CASE("properness") {
  CHECK(check_proper(gen_hypercube_graph(3)));
  CHECK(!check_proper(graph_of(3, {{0, 1, 0}, {1, 2, 0}, {0, 2, 0}})));
  CHECK(check_proper(graph_of(2, {{0, 1, 0}, {0, 1, 1}})));
  CHECK(!check_proper(graph_of(2, {{0, 1, 0}, {0, 1, 0}})));
  ColoredGraph g(3);
  CHECK_THROWS_AS(g.add_edge(1, 1, 0), PreconditionError);
  CHECK_THROWS_AS(g.add_edge(0, 3, 0), PreconditionError);
  CHECK_THROWS_AS(find_rainbow_cycle(graph_of(3, {{0, 1, 0}, {1, 2, 0}})), PreconditionError);
}

TEST_CASE("small examples") {
  const ColoredGraph tri = graph_of(3, {{0, 1, 0}, {1, 2, 1}, {0, 2, 2}});
  const auto t = find_rainbow_cycle(tri);
  REQUIRE(t.found());
  CHECK(t.witness->length() == 3);
  CHECK(verify_rainbow_cycle(tri, *t.witness));

  const ColoredGraph par = graph_of(2, {{0, 1, 0}, {0, 1, 1}});
  const auto p = find_rainbow_cycle(par);
  REQUIRE(p.found());
  CHECK(p.witness->length() == 2);
  CHECK(verify_rainbow_cycle(par, *p.witness));

  const auto empty = find_rainbow_cycle(ColoredGraph(5));
  CHECK(empty.status == SearchStatus::absent_proven);
  const auto path = find_rainbow_cycle(graph_of(4, {{0, 1, 0}, {1, 2, 1}, {2, 3, 2}}));
  CHECK(path.status == SearchStatus::absent_proven);

  // A 4-cycle colored 0,1,0,1 has no rainbow cycle.
  const auto c4 = find_rainbow_cycle(gen_hypercube_graph(2));
  CHECK(c4.status == SearchStatus::absent_proven);
  CHECK(status_name(c4.status) == "AbsentProven");
}

TEST_CASE("the verifier rejects bad cycles") {
  const ColoredGraph g = graph_of(4, {{0, 1, 0}, {1, 2, 1}, {2, 0, 0}, {2, 3, 2}, {0, 2, 3}});
  CHECK(verify_rainbow_cycle(g, RainbowCycle{{0, 1, 4}, {0, 1, 2}}));
  CHECK(!verify_rainbow_cycle(g, RainbowCycle{{0, 1, 2}, {0, 1, 2}}));  // color 0 twice
  CHECK(!verify_rainbow_cycle(g, RainbowCycle{{0, 1, 3}, {0, 1, 2}}));  // not closed
  CHECK(!verify_rainbow_cycle(g, RainbowCycle{{0, 1}, {0, 1}}));
  CHECK(!verify_rainbow_cycle(g, RainbowCycle{{}, {}}));
  CHECK(!verify_rainbow_cycle(g, RainbowCycle{{0, 1, 9}, {0, 1, 2}}));
}

TEST_CASE("hypercubes have no rainbow cycle") {
  for (std::uint32_t d = 1; d <= 6; ++d) {
    CAPTURE(d);
    const auto res = find_rainbow_cycle(gen_hypercube_graph(d));
    CHECK(res.status == SearchStatus::absent_proven);
  }
}

TEST_CASE("agreement with the subset-enumeration oracle") {
  Rng rng(77);
  int found = 0, absent = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto n = static_cast<std::uint32_t>(2 + rng.below(9));
    const auto attempts = static_cast<std::uint32_t>(1 + rng.below(15));
    const auto colors = static_cast<std::uint32_t>(1 + rng.below(6));
    const ColoredGraph g = gen_random_proper_graph(n, attempts, colors, rng.next());
    CAPTURE(trial);
    const auto res = find_rainbow_cycle(g);
    REQUIRE(res.status != SearchStatus::budget_exhausted);
    CHECK(res.found() == oracle::has_rainbow_cycle(g));
    if (res.found()) {
      CHECK(verify_rainbow_cycle(g, *res.witness));
      ++found;
    } else {
      ++absent;
    }
  }
  CHECK(found > 50);
  CHECK(absent > 50);
}

TEST_CASE("the first cycle is a shortest one") {
  // Oracle: shortest rainbow cycle length by brute force over subsets.
  Rng rng(5);
  for (int trial = 0; trial < 150; ++trial) {
    const ColoredGraph g = gen_random_proper_graph(8, 14, 5, rng.next());
    const auto res = find_rainbow_cycle(g);
    if (!res.found()) continue;
    std::size_t shortest = 99;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << g.edges.size()); ++mask) {
      ColoredGraph sub(g.n);
      for (std::size_t e = 0; e < g.edges.size(); ++e)
        if ((mask >> e) & 1U) sub.add_edge(g.edges[e].u, g.edges[e].v, g.edges[e].color);
      if (static_cast<std::size_t>(__builtin_popcountll(mask)) < shortest && oracle::has_rainbow_cycle(sub)) {
        // sub has a rainbow cycle; it is exactly sub when every vertex has degree 0 or 2.
        std::vector<int> deg(g.n);
        for (const auto& e : sub.edges) ++deg[e.u], ++deg[e.v];
        bool cycle = true;
        for (int d : deg) cycle = cycle && (d == 0 || d == 2);
        if (cycle) shortest = sub.edges.size();
      }
    }
    CHECK(res.witness->length() == shortest);
  }
}

TEST_CASE("budget exhaustion is inconclusive") {
  const ColoredGraph g = gen_hypercube_graph(6);
  const auto res = find_rainbow_cycle(g, 50);
  CHECK(res.status == SearchStatus::budget_exhausted);
  CHECK(!res.witness);
  CHECK(res.nodes_expanded <= 51);
}

TEST_CASE("graph files round-trip") {
  const ColoredGraph g = gen_random_proper_graph(10, 20, 4, 3);
  CHECK(parse_graph(serialize_graph(g)) == g);
  CHECK_THROWS(parse_graph("{\"n\":2,\"edges\":[[0,0,1]]}"));
  CHECK_THROWS(parse_graph("{\"n\":2,"));
}

TEST_CASE("r = 2 even covers and rainbow cycles agree") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const ColoredGraph g = gen_random_proper_graph(8, static_cast<std::uint32_t>(1 + rng.below(14)), 4, rng.next());
    ColoredHypergraph h(g.n);
    for (const auto& e : g.edges) h.add_edge({e.u, e.v}, e.color);
    CHECK(find_rainbow_cycle(g).found() == find_rainbow_even_cover(h).found());
  }
}
