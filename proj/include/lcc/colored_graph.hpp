#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lcc/instance.hpp"

namespace lcc {

struct ColoredEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  std::uint32_t color = 0;

  friend bool operator==(const ColoredEdge&, const ColoredEdge&) = default;
};

/// Multigraph on [0, n) with a color per edge. Parallel edges are allowed,
/// self-loops are not.
struct ColoredGraph {
  std::uint32_t n = 0;
  std::vector<ColoredEdge> edges;

  ColoredGraph() = default;
  explicit ColoredGraph(std::uint32_t vertices) : n(vertices) {}

  /// Throws PreconditionError on a self-loop or an endpoint >= n.
  std::uint32_t add_edge(std::uint32_t u, std::uint32_t v, std::uint32_t color);

  friend bool operator==(const ColoredGraph&, const ColoredGraph&) = default;
};

/// Every color class is a matching.
bool check_proper(const ColoredGraph& g);

struct ColoredHyperedge {
  Hyperedge vertices;  // sorted, distinct
  std::uint32_t color = 0;

  friend bool operator==(const ColoredHyperedge&, const ColoredHyperedge&) = default;
};

/// A family of colored hyperedges on [0, n); the matchings H_i of an
/// instance become color classes.
struct ColoredHypergraph {
  std::uint32_t n = 0;
  std::vector<ColoredHyperedge> edges;

  ColoredHypergraph() = default;
  explicit ColoredHypergraph(std::uint32_t vertices) : n(vertices) {}

  /// Sorts the vertices. Throws PreconditionError on an empty edge, a
  /// repeated vertex or a vertex >= n.
  std::uint32_t add_edge(Hyperedge vertices, std::uint32_t color);

  friend bool operator==(const ColoredHypergraph&, const ColoredHypergraph&) = default;
};

/// Every color class consists of pairwise disjoint hyperedges.
bool check_proper(const ColoredHypergraph& h);

/// Color i carries the edges of H_i.
ColoredHypergraph hypergraph_of(const LccInstance& inst);

// Graph JSON: {"n":..., "edges":[[u,v,color],...]}
std::string serialize_graph(const ColoredGraph& g);
ColoredGraph parse_graph(std::string_view text);
ColoredGraph read_graph(const std::filesystem::path& path);
void write_graph(const ColoredGraph& g, const std::filesystem::path& path);

// Matchings JSON: {"n":..., "matchings":{"<color>":[[a,b,...],...],...}}.
// parse_matchings also accepts a full instance file and uses its matchings.
std::string serialize_matchings(const ColoredHypergraph& h);
ColoredHypergraph parse_matchings(std::string_view text);
ColoredHypergraph read_matchings(const std::filesystem::path& path);
void write_matchings(const ColoredHypergraph& h, const std::filesystem::path& path);

}  // namespace lcc
