#include "lcc/colored_graph.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include <json.hpp>

#include "lcc/errors.hpp"
#include "lcc/instance_io.hpp"

namespace lcc {

using nlohmann::json;

std::uint32_t ColoredGraph::add_edge(std::uint32_t u, std::uint32_t v, std::uint32_t color) {
  if (u == v) throw PreconditionError("self-loop at vertex " + std::to_string(u));
  if (u >= n || v >= n) throw PreconditionError("edge endpoint out of range");
  edges.push_back({u, v, color});
  return static_cast<std::uint32_t>(edges.size() - 1);
}

bool check_proper(const ColoredGraph& g) {
  // (color, vertex) pairs must be unique.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> seen;
  seen.reserve(g.edges.size() * 2);
  for (const ColoredEdge& e : g.edges) {
    seen.emplace_back(e.color, e.u);
    seen.emplace_back(e.color, e.v);
  }
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

std::uint32_t ColoredHypergraph::add_edge(Hyperedge vertices, std::uint32_t color) {
  if (vertices.empty()) throw PreconditionError("empty hyperedge");
  std::sort(vertices.begin(), vertices.end());
  if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
    throw PreconditionError("hyperedge " + format_edge(vertices) + " repeats a vertex");
  if (vertices.back() >= n) throw PreconditionError("hyperedge " + format_edge(vertices) + " has a vertex >= n");
  edges.push_back({std::move(vertices), color});
  return static_cast<std::uint32_t>(edges.size() - 1);
}

bool check_proper(const ColoredHypergraph& h) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const ColoredHyperedge& e : h.edges)
    for (std::uint32_t a : e.vertices) seen.emplace_back(e.color, a);
  std::sort(seen.begin(), seen.end());
  return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
}

ColoredHypergraph hypergraph_of(const LccInstance& inst) {
  ColoredHypergraph h(inst.n);
  for (const auto& [owner, m] : inst.matchings)
    for (const Hyperedge& e : m.edges) h.add_edge(e, owner);
  return h;
}

namespace {

json parse_json(std::string_view text, const char* what) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw ParseError(std::string(what) + " file must hold a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + " file is not valid JSON: " + e.what());
  }
}

}  // namespace

std::string serialize_graph(const ColoredGraph& g) {
  json edges = json::array();
  for (const ColoredEdge& e : g.edges) edges.push_back({e.u, e.v, e.color});
  return json{{"n", g.n}, {"edges", std::move(edges)}}.dump() + "\n";
}

ColoredGraph parse_graph(std::string_view text) {
  const json j = parse_json(text, "graph");
  try {
    ColoredGraph g(j.at("n").get<std::uint32_t>());
    for (const json& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) throw ParseError("graph edges must be [u, v, color] triples");
      try {
        g.add_edge(e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>(), e[2].get<std::uint32_t>());
      } catch (const PreconditionError& err) {
        throw StructuralError(err.what());
      }
    }
    return g;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed graph file: ") + e.what());
  }
}

ColoredGraph read_graph(const std::filesystem::path& path) { return parse_graph(read_text_file(path)); }

void write_graph(const ColoredGraph& g, const std::filesystem::path& path) { write_text_file(path, serialize_graph(g)); }

std::string serialize_matchings(const ColoredHypergraph& h) {
  std::map<std::uint32_t, std::vector<Hyperedge>> classes;
  for (const ColoredHyperedge& e : h.edges) classes[e.color].push_back(e.vertices);
  json m = json::object();
  for (auto& [color, list] : classes) {
    std::sort(list.begin(), list.end());
    m[std::to_string(color)] = list;
  }
  return json{{"n", h.n}, {"matchings", std::move(m)}}.dump() + "\n";
}

ColoredHypergraph parse_matchings(std::string_view text) {
  const json j = parse_json(text, "matchings");
  if (j.contains("format_version")) {
    AnyInstance any = parse_instance(text);
    if (auto* lcc = std::get_if<LccInstance>(&any)) return hypergraph_of(*lcc);
    throw ParseError("even-cover input must be an lcc instance or a matchings file");
  }
  try {
    ColoredHypergraph h(j.at("n").get<std::uint32_t>());
    // Keys are ordered numerically so edge ids follow color order.
    std::map<std::uint32_t, const json*> classes;
    for (const auto& [key, list] : j.at("matchings").items()) {
      std::uint32_t color = 0;
      const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), color);
      if (ec != std::errc{} || ptr != key.data() + key.size()) throw ParseError("color key '" + key + "' is not an integer");
      classes[color] = &list;
    }
    for (const auto& [color, list] : classes) {
      for (const json& e : *list) {
        try {
          h.add_edge(e.get<Hyperedge>(), color);
        } catch (const PreconditionError& err) {
          throw StructuralError(err.what());
        }
      }
    }
    return h;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed matchings file: ") + e.what());
  }
}

ColoredHypergraph read_matchings(const std::filesystem::path& path) { return parse_matchings(read_text_file(path)); }

void write_matchings(const ColoredHypergraph& h, const std::filesystem::path& path) {
  write_text_file(path, serialize_matchings(h));
}

}  // namespace lcc
