#include "lcc/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lcc/errors.hpp"

namespace lcc {

using nlohmann::json;

namespace {

json matchings_to_json(const auto& matchings) {
  json out = json::object();
  for (const auto& [owner, m] : matchings) {
    json edges = json::array();
    for (const Hyperedge& e : m.edges) edges.push_back(e);
    out[std::to_string(owner)] = std::move(edges);
  }
  return out;
}

json header(const char* kind, std::uint32_t q, std::uint32_t n, std::uint32_t k, std::uint32_t r, const Rational& delta) {
  return json{{"format_version", kFormatVersion}, {"kind", kind}, {"q", q},
              {"n", n}, {"k", k}, {"r", r}, {"delta", format_rational(delta)}};
}

std::uint32_t parse_key(const std::string& key) {
  std::uint32_t v = 0;
  const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), v);
  if (ec != std::errc{} || ptr != key.data() + key.size() || key.empty())
    throw ParseError("matching key '" + key + "' is not a non-negative integer");
  return v;
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

std::uint32_t require_u32(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_unsigned()) throw ParseError(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::uint32_t>();
}

std::vector<Hyperedge> parse_edges(const json& arr, std::uint32_t owner) {
  if (!arr.is_array()) throw ParseError("matching " + std::to_string(owner) + " is not an array");
  std::vector<Hyperedge> edges;
  for (const json& e : arr) {
    if (!e.is_array()) throw ParseError("edge of matching " + std::to_string(owner) + " is not an array");
    Hyperedge edge;
    for (const json& a : e) {
      if (!a.is_number_unsigned()) throw ParseError("edge entries must be non-negative integers");
      edge.push_back(a.get<std::uint32_t>());
    }
    edges.push_back(std::move(edge));
  }
  return edges;
}

LccInstance lcc_from_json(const json& j) {
  LccInstance inst;
  inst.n = require_u32(j, "n");
  inst.k = require_u32(j, "k");
  inst.r = require_u32(j, "r");
  if (require_u32(j, "q") != 2) throw ParseError("lcc instances are binary (q must be 2)");
  inst.delta = parse_rational(require(j, "delta").get<std::string>());
  const json& rows = require(j, "rows");
  if (!rows.is_array() || rows.size() != inst.n) throw StructuralError("rows must be an array of n entries");
  inst.rows = BitMatrix(inst.n, inst.k);
  for (std::uint32_t i = 0; i < inst.n; ++i) {
    if (!rows[i].is_string()) throw ParseError("lcc rows must be hex strings");
    inst.rows.set_row(i, BitRow::from_hex(rows[i].get<std::string>(), inst.k));
  }
  for (const auto& [key, arr] : require(j, "matchings").items()) {
    const std::uint32_t owner = parse_key(key);
    inst.matchings[owner] = Matching{owner, parse_edges(arr, owner)};
  }
  check_structure(inst);
  canonicalize(inst);
  return inst;
}

LdcInstance ldc_from_json(const json& j) {
  LdcInstance inst;
  inst.n = require_u32(j, "n");
  inst.k = require_u32(j, "k");
  inst.r = require_u32(j, "r");
  inst.q = require_u32(j, "q");
  inst.delta = parse_rational(require(j, "delta").get<std::string>());
  const json& rows = require(j, "rows");
  if (!rows.is_array() || rows.size() != inst.n) throw StructuralError("rows must be an array of n entries");
  inst.rows.assign(std::size_t{inst.n} * inst.k, 0);
  for (std::uint32_t i = 0; i < inst.n; ++i) {
    if (inst.q == 2) {
      if (!rows[i].is_string()) throw ParseError("binary ldc rows must be hex strings");
      const BitRow bits = BitRow::from_hex(rows[i].get<std::string>(), inst.k);
      for (std::uint32_t c = 0; c < inst.k; ++c) inst.rows[std::size_t{i} * inst.k + c] = bits.get(c) ? 1 : 0;
    } else {
      if (!rows[i].is_array() || rows[i].size() != inst.k) throw ParseError("ldc rows over F_q must be arrays of k residues");
      for (std::uint32_t c = 0; c < inst.k; ++c) {
        if (!rows[i][c].is_number_unsigned()) throw ParseError("row residues must be non-negative integers");
        inst.rows[std::size_t{i} * inst.k + c] = rows[i][c].get<std::uint32_t>();
      }
    }
  }
  const json& coeffs = require(j, "coeffs");
  for (const auto& [key, arr] : require(j, "matchings").items()) {
    const std::uint32_t owner = parse_key(key);
    LdcMatching m{owner, parse_edges(arr, owner), {}};
    auto c = coeffs.find(key);
    if (c == coeffs.end()) throw StructuralError("matching " + key + " has no coefficient list");
    for (const json& alpha : *c) {
      std::vector<std::uint32_t> list;
      for (const json& a : alpha) {
        if (!a.is_number_unsigned()) throw ParseError("coefficients must be non-negative integers");
        list.push_back(a.get<std::uint32_t>());
      }
      m.coeffs.push_back(std::move(list));
    }
    inst.matchings[owner] = std::move(m);
  }
  check_structure(inst);
  canonicalize(inst);
  return inst;
}

}  // namespace

std::string serialize_instance(const LccInstance& original) {
  LccInstance inst = original;
  canonicalize(inst);
  json j = header("lcc", 2, inst.n, inst.k, inst.r, inst.delta);
  json rows = json::array();
  for (std::uint32_t i = 0; i < inst.n; ++i) rows.push_back(inst.rows.row(i).to_hex());
  j["rows"] = std::move(rows);
  j["matchings"] = matchings_to_json(inst.matchings);
  return j.dump() + "\n";
}

std::string serialize_instance(const LdcInstance& original) {
  LdcInstance inst = original;
  canonicalize(inst);
  json j = header("ldc", inst.q, inst.n, inst.k, inst.r, inst.delta);
  json rows = json::array();
  for (std::uint32_t i = 0; i < inst.n; ++i) {
    const auto row = inst.row(i);
    if (inst.q == 2) {
      BitRow bits(inst.k);
      for (std::uint32_t c = 0; c < inst.k; ++c) bits.set(c, row[c] != 0);
      rows.push_back(bits.to_hex());
    } else {
      rows.push_back(std::vector<std::uint32_t>(row.begin(), row.end()));
    }
  }
  j["rows"] = std::move(rows);
  j["matchings"] = matchings_to_json(inst.matchings);
  json coeffs = json::object();
  for (const auto& [owner, m] : inst.matchings) coeffs[std::to_string(owner)] = m.coeffs;
  j["coeffs"] = std::move(coeffs);
  return j.dump() + "\n";
}

AnyInstance parse_instance(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("instance file must hold a JSON object");
  const json& version = require(j, "format_version");
  if (!version.is_number_integer() || version.get<long long>() != kFormatVersion)
    throw VersionError("unsupported format_version " + version.dump() + " (expected " + std::to_string(kFormatVersion) + ")");
  try {
    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "lcc") return lcc_from_json(j);
    if (kind == "ldc") return ldc_from_json(j);
    throw ParseError("unknown instance kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed instance file: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
  if (!out) throw ParseError("write failed for " + path.string());
}

void write_instance(const LccInstance& inst, const std::filesystem::path& path) {
  write_text_file(path, serialize_instance(inst));
}

void write_instance(const LdcInstance& inst, const std::filesystem::path& path) {
  write_text_file(path, serialize_instance(inst));
}

AnyInstance read_instance(const std::filesystem::path& path) { return parse_instance(read_text_file(path)); }

LccInstance read_lcc(const std::filesystem::path& path) {
  AnyInstance any = read_instance(path);
  if (auto* lcc = std::get_if<LccInstance>(&any)) return std::move(*lcc);
  throw ParseError(path.string() + " holds an ldc instance, expected lcc");
}

LdcInstance read_ldc(const std::filesystem::path& path) {
  AnyInstance any = read_instance(path);
  if (auto* ldc = std::get_if<LdcInstance>(&any)) return std::move(*ldc);
  throw ParseError(path.string() + " holds an lcc instance, expected ldc");
}

}  // namespace lcc
