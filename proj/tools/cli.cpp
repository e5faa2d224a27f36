#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "lcc/colored_graph.hpp"
#include "lcc/compressor.hpp"
#include "lcc/errors.hpp"
#include "lcc/even_cover.hpp"
#include "lcc/generators.hpp"
#include "lcc/instance.hpp"
#include "lcc/instance_io.hpp"
#include "lcc/ldc_coupling.hpp"
#include "lcc/linalg.hpp"
#include "lcc/rainbow.hpp"
#include "lcc/rational.hpp"
#include "lcc/rng.hpp"
#include "lcc/simd/bitops.hpp"

#ifndef LCC_VERSION
#define LCC_VERSION "dev"
#endif

namespace lcctool {
namespace {

using json = nlohmann::json;
using namespace lcc;
namespace fs = std::filesystem;

constexpr const char* kGlobalFooter =
    "Global flags (accepted before or after the subcommand): --seed, --budget, --out, --csv, --json, --quiet";

struct Options {
  // global
  std::uint64_t seed = 1;
  std::uint64_t budget = kDefaultSearchBudget;
  std::string out;
  std::string csv;
  bool json = false;
  bool quiet = false;
  bool no_manifest = false;  // set by replay
  std::string only_row;      // set by replay --row

  // gen
  std::uint32_t k = 3;
  std::string target_delta;
  unsigned retries = kDefaultPackingRetries;
  std::uint32_t kernel_n = 64;
  std::vector<std::uint32_t> targets;
  std::uint32_t target_count = 0;
  std::uint32_t per_target = 4;
  std::uint32_t ldc_k = 4;
  std::uint32_t q = 2;
  std::uint32_t d = 4;
  std::uint32_t match_n = 16;
  std::uint32_t match_r = 4;
  std::uint32_t match_colors = 12;
  std::uint32_t edges_per_color = 2;
  std::uint32_t graph_n = 32;
  std::uint32_t graph_attempts = 64;
  std::uint32_t graph_colors = 8;

  // inputs and searches
  std::string input;
  std::string graph;
  bool strict = false;
  std::uint32_t ell = 2;
  bool build_only = false;

  // compress / cover
  std::string x;
  std::size_t samples = 1;
  std::size_t random_support = 0;
  bool exhaustive = false;
  std::uint32_t min_part_size = 8;
  std::uint32_t p = 0;
  std::uint32_t max_rounds = 8;
  std::size_t coverage_target = 0;
  unsigned parallel = 1;

  // ldc
  std::uint64_t retry_budget = 0;
  bool approx = false;

  // bench
  std::size_t words = 1024;
  std::size_t iterations = 20000;
  std::size_t dim = 512;

  // replay
  std::string manifest;
  std::string row;
};

struct Ctx {
  Options& o;
  std::ostream& out;
  std::ostream& err;
  const std::vector<std::string>& args;
  CLI::App& app;
  CLI::App& sub;
  std::string command;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
  std::time_t started_wall = std::time(nullptr);
};

// ---------------------------------------------------------------- helpers

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int{md[i]};
  return s.str();
}

std::string iso_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

std::string edge_list(const std::vector<std::uint32_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

/// Runs f(0..count-1), on `threads` workers when threads > 1. The first
/// exception is rethrown after all workers stop.
void for_each_index(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& f) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr failure;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(threads, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; !failed && (i = next++) < count;) {
        try {
          f(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void emit_text(Ctx& c, const std::string& text) {
  if (!c.o.quiet) c.out << text;
}

// Writes the main artifact to --out, or to stdout without it.
void emit_artifact(Ctx& c, const std::string& text, const std::string& what) {
  if (c.o.out.empty()) {
    c.out << text;
  } else {
    write_text_file(c.o.out, text);
    if (!c.o.quiet) c.err << "wrote " << what << " to " << c.o.out << "\n";
  }
}

// ------------------------------------------------------------------ tables

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  json summary = json::object();
  std::vector<std::string> summary_lines;
  std::string instance_path;
};

std::string csv_text(const Table& t) {
  std::string s = join(t.header, ",") + "\n";
  for (const auto& r : t.rows) s += join(r, ",") + "\n";
  return s;
}

void write_manifest(Ctx& c, const Table& t, const std::string& csv) {
  const Options& o = c.o;
  json m;
  m["manifest_version"] = 1;
  m["tool"] = "lcctool";
  m["version"] = LCC_VERSION;
  m["subcommand"] = c.command;
  m["argv"] = c.args;
  m["cwd"] = fs::current_path().string();
  json config = json::object();
  for (CLI::App* a : {&c.app, &c.sub})
    for (const CLI::Option* opt : a->get_options()) {
      if (opt->get_group().empty() || opt->get_name() == "--help" || opt->get_name() == "--version") continue;
      std::string value = opt->get_expected_max() == 0 ? (opt->count() ? "true" : "false")
                          : opt->count()             ? join(opt->results(), ",")
                                                     : opt->get_default_str();
      config[opt->get_name(false, true)] = value;
    }
  m["config"] = config;
  m["seed"] = o.seed;
  m["budget"] = o.budget;
  m["instance"] = {{"path", t.instance_path}, {"sha256", sha256_hex(read_text_file(t.instance_path))}};
  m["csv"] = {{"path", o.csv}, {"rows", t.rows.size()}, {"sha256", sha256_hex(csv)}};
  m["parallel"] = o.parallel;
  m["nondeterministic"] = o.parallel > 1;
  m["isa"] = std::string(simd::isa_name(simd::active_kernels().isa));
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - c.started).count();
  m["timing"] = {{"started_utc", iso_utc(c.started_wall)}, {"elapsed_ms", ms}};
  m["summary"] = t.summary;
  write_text_file(o.csv + ".manifest.json", m.dump(2) + "\n");
}

void emit_table(Ctx& c, const Table& t) {
  const Options& o = c.o;
  const std::string csv = csv_text(t);
  const bool csv_to_file = !o.csv.empty() && o.csv != "-";
  if (csv_to_file) {
    write_text_file(o.csv, csv);
    if (!o.no_manifest) write_manifest(c, t, csv);
  }
  if (o.json) {
    json j;
    j["columns"] = t.header;
    j["rows"] = t.rows;
    j["summary"] = t.summary;
    c.out << j.dump(2) << "\n";
    return;
  }
  if (!csv_to_file) c.out << csv;
  if (!o.quiet) {
    std::ostream& s = csv_to_file ? c.out : c.err;
    for (const auto& line : t.summary_lines) s << line << "\n";
  }
}

// --------------------------------------------------------------------- gen

Rational hadamard_default_delta(std::uint32_t k) {
  // A packing of H_i in the k = 3 code never holds more than one triple.
  return k == 3 ? Rational(1, 8) : Rational(1, 4);
}

int cmd_gen_hadamard(Ctx& c) {
  const Options& o = c.o;
  const Rational delta = o.target_delta.empty() ? hadamard_default_delta(o.k) : parse_rational(o.target_delta);
  LccInstance inst = gen_hadamard(o.k, o.seed, delta, o.retries);
  emit_artifact(c, serialize_instance(inst), "hadamard instance (n=" + std::to_string(inst.n) + ", delta=" +
                                                 format_rational(inst.delta) + ")");
  return kExitOk;
}

int cmd_gen_kernel(Ctx& c) {
  const Options& o = c.o;
  std::vector<std::uint32_t> targets = o.targets;
  if (targets.empty()) {
    const std::uint32_t count = o.target_count == 0 ? o.kernel_n : o.target_count;
    if (count > o.kernel_n) throw PreconditionError("--target-count exceeds --n");
    for (std::uint32_t i = 0; i < count; ++i) targets.push_back(i);
  }
  LccInstance inst = gen_constraint_kernel(o.kernel_n, targets, o.per_target, o.seed);
  emit_artifact(c, serialize_instance(inst),
                "constraint-kernel instance (n=" + std::to_string(inst.n) + ", k=" + std::to_string(inst.k) + ")");
  return kExitOk;
}

int cmd_gen_hadamard_ldc(Ctx& c) {
  LdcInstance inst = gen_hadamard_ldc(c.o.ldc_k, c.o.q);
  emit_artifact(c, serialize_instance(inst), "hadamard 2-LDC (n=" + std::to_string(inst.n) + ")");
  return kExitOk;
}

int cmd_gen_hypercube(Ctx& c) {
  emit_artifact(c, serialize_graph(gen_hypercube_graph(c.o.d)), "hypercube graph");
  return kExitOk;
}

int cmd_gen_matchings(Ctx& c) {
  const Options& o = c.o;
  emit_artifact(c, serialize_matchings(gen_random_matchings(o.match_n, o.match_r, o.match_colors, o.edges_per_color, o.seed)),
                "random matchings");
  return kExitOk;
}

int cmd_gen_graph(Ctx& c) {
  const Options& o = c.o;
  emit_artifact(c, serialize_graph(gen_random_proper_graph(o.graph_n, o.graph_attempts, o.graph_colors, o.seed)),
                "random proper graph");
  return kExitOk;
}

// ---------------------------------------------------------------- validate

int cmd_validate(Ctx& c) {
  const AnyInstance any = read_instance(c.o.input);
  ValidationReport report;
  nlohmann::ordered_json head;
  if (const auto* lcc_inst = std::get_if<LccInstance>(&any)) {
    report = validate_lcc(*lcc_inst, c.o.strict);
    head = {{"kind", "lcc"}, {"n", lcc_inst->n}, {"k", lcc_inst->k}, {"r", lcc_inst->r},
            {"delta", format_rational(lcc_inst->delta)}, {"matchings", lcc_inst->matchings.size()}};
    if (!lcc_inst->matchings.empty()) head["effective_delta"] = format_rational(effective_delta(*lcc_inst));
  } else {
    const auto& ldc = std::get<LdcInstance>(any);
    report = validate_ldc(ldc);
    head = {{"kind", "ldc"}, {"n", ldc.n}, {"k", ldc.k}, {"r", ldc.r}, {"q", ldc.q},
            {"delta", format_rational(ldc.delta)}, {"matchings", ldc.matchings.size()}};
    if (!ldc.matchings.empty()) head["effective_delta"] = format_rational(effective_delta(ldc));
  }
  if (c.o.json) {
    nlohmann::ordered_json j = head;
    j["strict"] = c.o.strict;
    j["passed"] = report.passed();
    j["checks"] = json::array();
    for (const auto& ch : report.checks)
      j["checks"].push_back({{"name", ch.name}, {"passed", ch.passed}, {"counterexample", ch.counterexample}});
    c.out << j.dump(2) << "\n";
  } else {
    std::ostringstream s;
    for (const auto& [key, value] : head.items()) s << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
    for (const auto& ch : report.checks) {
      s << (ch.passed ? "ok     " : "FAILED ") << ch.name;
      if (!ch.passed) s << ": " << ch.counterexample;
      s << "\n";
    }
    s << (report.passed() ? "valid" : "INVALID") << "\n";
    // Counterexamples are always shown, even with --quiet.
    if (report.passed()) emit_text(c, s.str());
    else c.out << s.str();
  }
  return report.passed() ? kExitOk : kExitValidation;
}

// ------------------------------------------------------------------ search

int search_exit(SearchStatus s) { return s == SearchStatus::budget_exhausted ? kExitBudget : kExitOk; }

int cmd_rainbow(Ctx& c) {
  const ColoredGraph g = read_graph(c.o.graph);
  const auto res = find_rainbow_cycle(g, c.o.budget);
  if (res.witness && !verify_rainbow_cycle(g, *res.witness)) throw InvariantViolation("rainbow cycle failed verification");
  if (c.o.json) {
    json j = {{"outcome", status_name(res.status)}, {"nodes_expanded", res.nodes_expanded}, {"n", g.n}, {"edges", g.edges.size()}};
    if (res.witness) {
      json edges = json::array();
      for (std::uint32_t id : res.witness->edges) {
        const auto& e = g.edges[id];
        edges.push_back({{"id", id}, {"u", e.u}, {"v", e.v}, {"color", e.color}});
      }
      j["cycle"] = {{"length", res.witness->length()}, {"vertices", res.witness->vertices}, {"edges", edges}};
    }
    c.out << j.dump(2) << "\n";
  } else {
    std::ostringstream s;
    s << "outcome: " << status_name(res.status) << "\n";
    s << "nodes_expanded: " << res.nodes_expanded << "\n";
    if (res.witness) {
      s << "length: " << res.witness->length() << "\n";
      for (std::size_t t = 0; t < res.witness->length(); ++t) {
        const auto& e = g.edges[res.witness->edges[t]];
        s << "  edge " << res.witness->edges[t] << ": " << e.u << " - " << e.v << " color " << e.color << "\n";
      }
    }
    c.out << s.str();
  }
  return search_exit(res.status);
}

void print_cover(Ctx& c, const ColoredHypergraph& h, SearchStatus status, std::uint64_t nodes,
                 const std::optional<RainbowEvenCover>& cover, json extra) {
  if (c.o.json) {
    json j = std::move(extra);
    j["outcome"] = status_name(status);
    j["nodes_expanded"] = nodes;
    if (cover) {
      json edges = json::array();
      for (std::uint32_t id : cover->edges)
        edges.push_back({{"id", id}, {"color", h.edges[id].color}, {"vertices", h.edges[id].vertices}});
      j["cover"] = edges;
    }
    c.out << j.dump(2) << "\n";
    return;
  }
  std::ostringstream s;
  for (const auto& [key, value] : extra.items()) s << key << ": " << value.dump() << "\n";
  s << "outcome: " << status_name(status) << "\n";
  s << "nodes_expanded: " << nodes << "\n";
  if (cover) {
    s << "cover size: " << cover->edges.size() << "\n";
    for (std::uint32_t id : cover->edges)
      s << "  color " << h.edges[id].color << ": " << edge_list(h.edges[id].vertices) << "\n";
  }
  c.out << s.str();
}

int cmd_even_cover(Ctx& c) {
  const ColoredHypergraph h = read_matchings(c.o.input);
  const auto res = find_rainbow_even_cover(h, c.o.budget);
  if (res.witness && !verify_even_cover(h, *res.witness)) throw InvariantViolation("even cover failed verification");
  print_cover(c, h, res.status, res.nodes_expanded, res.witness, json::object());
  return search_exit(res.status);
}

int cmd_direct_sum(Ctx& c) {
  const ColoredHypergraph h = read_matchings(c.o.input);
  const DirectSumGraph dsg = direct_sum_graph(h, c.o.ell);
  if (!c.o.out.empty()) {
    write_graph(dsg.graph, c.o.out);
    if (!c.o.quiet) c.err << "wrote direct-sum graph to " << c.o.out << "\n";
  }
  json info = {{"ell", dsg.ell},
               {"vertices", dsg.graph.n},
               {"edges", dsg.graph.edges.size()},
               {"deleted_edges", dsg.deleted_edges}};
  if (c.o.build_only) {
    if (c.o.json) c.out << info.dump(2) << "\n";
    else for (const auto& [key, value] : info.items()) emit_text(c, key + ": " + value.dump() + "\n");
    return kExitOk;
  }
  const auto res = find_rainbow_cycle(dsg.graph, c.o.budget);
  std::optional<RainbowEvenCover> cover;
  if (res.witness) {
    cover = lift_cycle_to_cover(*res.witness, dsg, h);
    info["cycle_length"] = res.witness->length();
  }
  print_cover(c, h, res.status, res.nodes_expanded, cover, info);
  return search_exit(res.status);
}

// -------------------------------------------------------- compress / cover

CompressConfig compress_config(const Options& o) {
  CompressConfig cfg;
  cfg.p_override = o.p;
  cfg.min_part_size = o.min_part_size;
  cfg.budget = o.budget;
  cfg.max_rounds = o.max_rounds;
  cfg.seed = o.seed;
  cfg.coverage_target = o.coverage_target;
  return cfg;
}

int cmd_compress(Ctx& c, bool cover_mode) {
  const Options& o = c.o;
  const LccInstance inst = read_lcc(o.input);
  const CompressConfig cfg = compress_config(o);
  const RowSpanSolver solver(inst.rows);

  struct Job {
    BitRow x;
    std::uint64_t seed;
    std::optional<SparseRep> start;
  };
  std::vector<Job> jobs;
  if (!cover_mode && !o.x.empty()) {
    jobs.push_back({BitRow::from_hex(o.x, inst.k), cover_row_seed(o.seed, 0), std::nullopt});
  } else if (!cover_mode && o.random_support > 0) {
    for (std::size_t s = 0; s < o.samples; ++s) {
      const std::uint64_t row_seed = cover_row_seed(o.seed, s);
      SparseRep rep = random_representation(inst, o.random_support, derive_seed(row_seed, stream::kSample));
      BitRow x = rep.x;
      jobs.push_back({std::move(x), row_seed, std::move(rep)});
    }
  } else {
    const std::vector<BitRow> xs = cover_targets(inst, cover_mode && o.exhaustive, o.samples, o.seed);
    for (std::size_t i = 0; i < xs.size(); ++i) jobs.push_back({xs[i], cover_row_seed(o.seed, i), std::nullopt});
  }
  if (!o.only_row.empty())
    std::erase_if(jobs, [&](const Job& j) { return j.x.to_hex() != o.only_row; });

  std::vector<CoverRow> rows(jobs.size());
  for_each_index(jobs.size(), o.parallel, [&](std::size_t i) {
    const Job& job = jobs[i];
    if (!job.start) {
      rows[i] = cover_row(inst, solver, job.x, job.seed, cfg);
      return;
    }
    CompressConfig local = cfg;
    local.seed = job.seed;
    const CompressResult res = compress_from(inst, *job.start, local);
    assert_sound(inst, res.rep);
    rows[i] = CoverRow{job.x, job.seed, job.start->length(), res.rep.length(), res.trace.rounds,
                       res.trace.cycles_found, res.trace.budget_spent};
  });

  Table t;
  t.instance_path = o.input;
  t.header = {"x_id", "initial_len", "final_len", "rounds", "cycles_found", "budget_spent", "seed"};
  std::size_t max_initial = 0, max_final = 0;
  double total = 0;
  std::map<std::size_t, std::size_t> histogram;
  for (const CoverRow& r : rows) {
    t.rows.push_back({r.x.to_hex(), std::to_string(r.initial_len), std::to_string(r.final_len), std::to_string(r.rounds),
                      std::to_string(r.cycles_found), std::to_string(r.budget_spent), std::to_string(r.seed)});
    max_initial = std::max(max_initial, r.initial_len);
    max_final = std::max(max_final, r.final_len);
    total += static_cast<double>(r.final_len);
    ++histogram[r.final_len];
  }
  const double mean = rows.empty() ? 0.0 : total / static_cast<double>(rows.size());
  const double n = inst.n;
  const double delta = to_double(inst.delta);
  const double bound = delta > 0 && n > 2 ? std::log2(n) * std::log2(std::log2(n)) / (delta * delta) : 0.0;
  json hist = json::object();
  std::string hist_text;
  for (const auto& [len, count] : histogram) {
    hist[std::to_string(len)] = count;
    hist_text += " " + std::to_string(len) + ":" + std::to_string(count);
  }
  t.summary = {{"rows", rows.size()}, {"max_initial", max_initial}, {"max_final", max_final},
               {"mean_final", mean},  {"histogram", hist},          {"bound_annotation", bound}};
  std::ostringstream line;
  line << "rows " << rows.size() << ", max initial " << max_initial << ", max final " << max_final << ", mean final "
       << std::fixed << std::setprecision(3) << mean;
  t.summary_lines.push_back(line.str());
  t.summary_lines.push_back("final length histogram:" + hist_text);
  std::ostringstream ann;
  ann << "reference scale delta^-2 log n loglog n = " << std::fixed << std::setprecision(1) << bound
      << " (no absolute constant; annotation only)";
  t.summary_lines.push_back(ann.str());
  emit_table(c, t);
  return kExitOk;
}

// --------------------------------------------------------------------- ldc

std::vector<std::uint32_t> parse_residues(const std::string& text, const LdcInstance& ldc) {
  std::vector<std::uint32_t> v;
  std::stringstream s(text);
  for (std::string part; std::getline(s, part, ',');) {
    try {
      std::size_t used = 0;
      const unsigned long value = std::stoul(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
      v.push_back(static_cast<std::uint32_t>(value));
    } catch (const std::exception&) {
      throw PreconditionError("--x must be a comma-separated list of residues");
    }
  }
  if (v.size() != ldc.k) throw PreconditionError("--x needs exactly k = " + std::to_string(ldc.k) + " residues");
  for (std::uint32_t r : v)
    if (r >= ldc.q) throw PreconditionError("--x has a residue outside [0, q)");
  return v;
}

std::string fq_id(const std::vector<std::uint32_t>& x, std::uint32_t q) {
  if (q == 2) {
    BitRow b(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i]) b.set(i);
    return b.to_hex();
  }
  std::string s;
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "." : "") + std::to_string(x[i]);
  return s;
}

double span_bound(const LdcInstance& ldc, const Rational& delta) {
  const double ratio = 1.0 - 2.0 * to_double(delta) / ldc.q;
  if (ratio <= 0.0 || ldc.k < 2) return 2.0;
  return 2.0 * std::ceil(std::log(static_cast<double>(ldc.k)) / std::log(1.0 / ratio)) + 2.0;
}

int cmd_ldc(Ctx& c, bool span) {
  const Options& o = c.o;
  const LdcInstance ldc = read_ldc(o.input);
  const CouplingTable table(ldc);

  struct Job {
    std::vector<std::uint32_t> x;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  const std::uint64_t sample_seed = derive_seed(o.seed, stream::kSample);
  const std::uint64_t row_seed = derive_seed(o.seed, stream::kRow);
  if (!o.x.empty()) {
    jobs.push_back({parse_residues(o.x, ldc), derive_seed(row_seed, 0)});
  } else {
    for (std::size_t s = 0; s < o.samples; ++s)
      jobs.push_back({random_fq_vector(ldc.k, ldc.q, derive_seed(sample_seed, s)), derive_seed(row_seed, s)});
  }
  if (!o.only_row.empty()) std::erase_if(jobs, [&](const Job& j) { return fq_id(j.x, ldc.q) != o.only_row; });

  struct Row {
    std::size_t w = 0, steps = 0, support = 0;
    std::uint64_t retries = 0;
    bool verified = false;
  };
  std::vector<Row> rows(jobs.size());
  for_each_index(jobs.size(), o.parallel, [&](std::size_t i) {
    const Job& job = jobs[i];
    Row& row = rows[i];
    row.w = fq_weight(job.x);
    if (row.w == 0) {
      row.verified = true;
      return;
    }
    if (!span) {
      const ContractionStep st = contraction_step(table, job.x, job.seed, o.retry_budget);
      row.retries = st.draws;
      if (!st.accepted) return;
      row.steps = 1;
      std::vector<std::uint32_t> idx, coef;
      const PrimeField& f = table.field();
      // x' - x = gamma1 v_a1 + gamma2 v_a2, checked by plain evaluation.
      std::map<std::uint32_t, std::uint32_t> merged;
      merged[st.a1] = f.add(merged[st.a1], st.gamma1);
      merged[st.a2] = f.add(merged[st.a2], st.gamma2);
      for (const auto& [a, g] : merged)
        if (g != 0) {
          idx.push_back(a);
          coef.push_back(g);
        }
      row.support = idx.size();
      std::vector<std::uint32_t> sum = evaluate_combination(ldc, idx, coef);
      for (std::uint32_t j = 0; j < ldc.k; ++j) sum[j] = f.add(sum[j], job.x[j]);
      row.verified = sum == st.x_next && fq_weight(st.x_next) <= st.threshold;
      return;
    }
    try {
      const SpanResult res = o.approx ? approx_span(table, job.x, job.seed, o.retry_budget)
                                      : sparse_span(table, job.x, job.seed, o.retry_budget);
      row.steps = res.steps;
      row.retries = res.retries_total;
      row.support = res.indices.size();
      row.verified = res.verified;
    } catch (const ContractionFailure& e) {
      row.retries = e.best().draws;
    }
  });

  Table t;
  t.instance_path = o.input;
  t.header = {"x_id", "w_initial", "steps", "retries_total", "I_size", "verified"};
  std::size_t failures = 0, max_steps = 0, max_support = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    t.rows.push_back({fq_id(jobs[i].x, ldc.q), std::to_string(r.w), std::to_string(r.steps), std::to_string(r.retries),
                      std::to_string(r.support), r.verified ? "1" : "0"});
    failures += r.verified ? 0 : 1;
    max_steps = std::max(max_steps, r.steps);
    max_support = std::max(max_support, r.support);
  }
  const double bound = span_bound(ldc, table.delta());
  t.summary = {{"rows", rows.size()},
               {"failures", failures},
               {"max_steps", max_steps},
               {"max_I_size", max_support},
               {"effective_delta", format_rational(table.delta())},
               {"I_size_reference", bound}};
  t.summary_lines.push_back("rows " + std::to_string(rows.size()) + ", unverified " + std::to_string(failures) +
                            ", max steps " + std::to_string(max_steps) + ", max |I| " + std::to_string(max_support));
  if (span) {
    std::ostringstream s;
    s << "reference |I| <= 2*ceil(log k / log(1/(1-2 delta/q))) + 2 = " << bound;
    t.summary_lines.push_back(s.str());
  }
  emit_table(c, t);
  return failures == 0 ? kExitOk : kExitBudget;
}

// ------------------------------------------------------------------- bench

int cmd_bench(Ctx& c) {
  const Options& o = c.o;
  if (o.words == 0 || o.iterations == 0) throw PreconditionError("--words and --iterations must be positive");
  std::vector<const simd::BitKernels*> variants{&simd::scalar_kernels()};
  if (const auto* k = simd::avx2_kernels()) variants.push_back(k);
  if (const auto* k = simd::neon_kernels()) variants.push_back(k);

  Rng rng(derive_seed(o.seed, stream::kSample));
  std::vector<Word> a(o.words), b(o.words), dst(o.words);
  for (auto& w : a) w = rng.next();
  for (auto& w : b) w = rng.next();
  b.back() |= 1;

  BitMatrix m(o.dim, o.dim);
  for (std::size_t i = 0; i < o.dim; ++i)
    for (auto& w : m.row_words(i)) w = rng.next();
  if (o.dim % kWordBits)
    for (std::size_t i = 0; i < o.dim; ++i) m.row_words(i).back() &= (Word{1} << (o.dim % kWordBits)) - 1;

  json results = json::array();
  std::optional<std::size_t> reference_pop, reference_rank;
  bool agree = true;
  for (const auto* kv : variants) {
    auto time_ns = [&](auto&& body) {
      const auto t0 = std::chrono::steady_clock::now();
      for (std::size_t it = 0; it < o.iterations; ++it) body();
      return std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t0).count() /
             static_cast<double>(o.iterations);
    };
    volatile std::size_t sink = 0;
    const double xor_ns = time_ns([&] { kv->xor_to(dst.data(), a.data(), b.data(), o.words); sink = sink + dst[0]; });
    const double pop_ns = time_ns([&] { sink = sink + kv->xor_popcount(a.data(), b.data(), o.words); });
    const double low_ns = time_ns([&] { sink = sink + kv->lowest_set_bit(dst.data() + o.words - 1, 1); });
    const std::size_t pop = kv->xor_popcount(a.data(), b.data(), o.words);
    if (!simd::force_isa(kv->isa)) continue;
    const auto r0 = std::chrono::steady_clock::now();
    const std::size_t rk = rank(m);
    const double rank_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - r0).count();
    simd::reset_isa();
    if (!reference_pop) reference_pop = pop, reference_rank = rk;
    agree = agree && pop == *reference_pop && rk == *reference_rank;
    results.push_back({{"isa", std::string(simd::isa_name(kv->isa))},
                       {"xor_ns", xor_ns},
                       {"xor_popcount_ns", pop_ns},
                       {"lowest_set_bit_ns", low_ns},
                       {"rank_ms", rank_ms},
                       {"rank", rk}});
  }
  if (o.json) {
    c.out << json{{"words", o.words}, {"dim", o.dim}, {"agree", agree}, {"results", results}}.dump(2) << "\n";
  } else {
    std::ostringstream s;
    s << "words " << o.words << ", iterations " << o.iterations << ", rank matrix " << o.dim << "x" << o.dim << "\n";
    s << std::left << std::setw(8) << "isa" << std::right << std::setw(12) << "xor ns" << std::setw(16) << "xor_pop ns"
      << std::setw(12) << "rank ms" << std::setw(8) << "rank" << "\n";
    for (const auto& r : results)
      s << std::left << std::setw(8) << r["isa"].get<std::string>() << std::right << std::fixed << std::setprecision(1)
        << std::setw(12) << r["xor_ns"].get<double>() << std::setw(16) << r["xor_popcount_ns"].get<double>()
        << std::setw(12) << std::setprecision(2) << r["rank_ms"].get<double>() << std::setw(8) << r["rank"].get<std::size_t>()
        << "\n";
    s << (agree ? "all variants agree" : "VARIANTS DISAGREE") << "\n";
    c.out << s.str();
  }
  if (!agree) throw InvariantViolation("SIMD variants disagree with the scalar kernels");
  return kExitOk;
}

// ------------------------------------------------------------------ replay

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream s(text);
  for (std::string line; std::getline(s, line);) lines.push_back(line);
  return lines;
}

int cmd_replay(Ctx& c) {
  const Options& o = c.o;
  json m;
  try {
    m = json::parse(read_text_file(o.manifest));
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!m.contains("argv") || !m.contains("csv") || !m.contains("cwd")) throw ParseError("manifest lacks argv, csv or cwd");
  std::vector<std::string> args = m["argv"].get<std::vector<std::string>>();
  const fs::path cwd = m["cwd"].get<std::string>();
  const fs::path original_csv = cwd / m["csv"]["path"].get<std::string>();
  fs::path target = o.out.empty() ? fs::path(original_csv.string() + (o.row.empty() ? ".replay" : ".row")) : fs::absolute(o.out);

  // Point --csv at the replay target.
  bool replaced = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--csv" && i + 1 < args.size()) {
      args[i + 1] = target.string();
      replaced = true;
    } else if (args[i].rfind("--csv=", 0) == 0) {
      args[i] = "--csv=" + target.string();
      replaced = true;
    }
  }
  if (!replaced) throw ParseError("manifest argv has no --csv");
  args.push_back("--no-manifest");
  if (!o.row.empty()) args.insert(args.end(), {"--only-row", o.row});

  const fs::path here = fs::current_path();
  int code = kExitOk;
  std::ostringstream sub_out;
  fs::current_path(cwd);
  try {
    const std::string digest = sha256_hex(read_text_file(m["instance"]["path"].get<std::string>()));
    if (digest != m["instance"]["sha256"].get<std::string>()) {
      fs::current_path(here);
      c.err << "instance file changed since the manifest was written\n";
      return kExitInput;
    }
    code = run(args, sub_out, c.err);
  } catch (...) {
    fs::current_path(here);
    throw;
  }
  fs::current_path(here);
  if (code != kExitOk && code != kExitBudget) return code;

  const std::vector<std::string> fresh = csv_lines(read_text_file(target));
  std::vector<std::string> original;
  if (fs::exists(original_csv)) original = csv_lines(read_text_file(original_csv));
  bool identical;
  std::size_t compared = 0;
  if (o.row.empty()) {
    identical = fresh == original;
    compared = fresh.empty() ? 0 : fresh.size() - 1;
  } else {
    // Every regenerated row must appear in the original, header included.
    std::multiset<std::string> pool(original.begin(), original.end());
    identical = !fresh.empty() && !original.empty() && fresh.front() == original.front();
    for (std::size_t i = 1; i < fresh.size(); ++i) {
      auto it = pool.find(fresh[i]);
      if (it == pool.end()) identical = false;
      else pool.erase(it);
      ++compared;
    }
    if (compared == 0) {
      c.err << "no row with x_id " << o.row << " in this run\n";
      return kExitPrecondition;
    }
  }
  if (o.json) {
    c.out << json{{"target", target.string()}, {"rows", compared}, {"identical", identical}}.dump(2) << "\n";
  } else {
    if (!o.row.empty())
      for (std::size_t i = 1; i < fresh.size(); ++i) c.out << fresh[i] << "\n";
    emit_text(c, std::to_string(compared) + " row(s) regenerated into " + target.string() + ": " +
                     (identical ? "byte-identical" : "DIFFERENT") + "\n");
  }
  return identical ? kExitOk : kExitValidation;
}

// --------------------------------------------------------------- app setup

struct Command {
  CLI::App* app;
  std::string name;
  std::function<int(Ctx&)> handler;
};

struct AppBundle {
  std::unique_ptr<CLI::App> app;
  std::vector<Command> commands;
};

AppBundle build_app(Options& o) {
  AppBundle b;
  b.app = std::make_unique<CLI::App>("Locally correctable code instances, rainbow searches and the compression algorithm.",
                                     "lcctool");
  CLI::App& app = *b.app;
  app.set_version_flag("--version", std::string(LCC_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();

  app.add_option("--seed", o.seed, "Root seed of the run")->group("Global");
  app.add_option("--budget", o.budget, "Node budget per exact search or coverage run")->group("Global");
  app.add_option("--out", o.out, "Output file for generated data (stdout without it)")->group("Global");
  app.add_option("--csv", o.csv, "Write the result table as CSV plus a <csv>.manifest.json")->group("Global");
  app.add_flag("--json", o.json, "Machine-readable JSON on stdout")->group("Global");
  app.add_flag("--quiet", o.quiet, "Only print essential output")->group("Global");
  app.add_flag("--no-manifest", o.no_manifest, "Internal: skip the manifest")->group("");
  app.add_option("--only-row", o.only_row, "Internal: regenerate rows with this x_id")->group("");

  auto sub = [&](CLI::App* parent, const std::string& name, const std::string& desc) {
    CLI::App* s = parent->add_subcommand(name, desc);
    s->fallthrough();
    s->footer(kGlobalFooter);
    return s;
  };
  auto add = [&](CLI::App* s, const std::string& path, std::function<int(Ctx&)> h) {
    b.commands.push_back({s, path, std::move(h)});
  };

  // gen
  CLI::App* gen = sub(&app, "gen", "Generate instances, graphs and matchings");
  gen->require_subcommand(1);
  {
    CLI::App* s = sub(gen, "hadamard", "Hadamard code with greedy triple packings (n = 2^k, r = 3)");
    s->add_option("--k", o.k, "Message length, 2..20")->check(CLI::Range(2, 20));
    s->add_option("--target-delta", o.target_delta, "Declared delta as p/q (default 1/4, or 1/8 for k = 3)");
    s->add_option("--retries", o.retries, "Packing attempts per index");
    add(s, "gen hadamard", cmd_gen_hadamard);
  }
  {
    CLI::App* s = sub(gen, "kernel", "Partial instance from random parity checks and their null space");
    s->add_option("--n", o.kernel_n, "Number of rows");
    s->add_option("--targets", o.targets, "Target indices (comma separated)")->delimiter(',');
    s->add_option("--target-count", o.target_count, "Use targets 0..C-1 (0: all of [0, n))");
    s->add_option("--per-target", o.per_target, "Disjoint triples per target");
    add(s, "gen kernel", cmd_gen_kernel);
  }
  {
    CLI::App* s = sub(gen, "hadamard-ldc", "Hadamard 2-query LDC over F_q (n = q^k)");
    s->add_option("--k", o.ldc_k, "Message length");
    s->add_option("--q", o.q, "Prime field size");
    add(s, "gen hadamard-ldc", cmd_gen_hadamard_ldc);
  }
  {
    CLI::App* s = sub(gen, "hypercube", "Boolean hypercube graph colored by direction");
    s->add_option("--d", o.d, "Dimension, 1..16")->check(CLI::Range(1, 16));
    add(s, "gen hypercube", cmd_gen_hypercube);
  }
  {
    CLI::App* s = sub(gen, "matchings", "Random r-uniform matchings, one per color");
    s->add_option("--n", o.match_n, "Vertices");
    s->add_option("--r", o.match_r, "Edge size");
    s->add_option("--colors", o.match_colors, "Number of colors");
    s->add_option("--edges-per-color", o.edges_per_color, "Edges in each matching");
    add(s, "gen matchings", cmd_gen_matchings);
  }
  {
    CLI::App* s = sub(gen, "graph", "Random properly colored multigraph");
    s->add_option("--n", o.graph_n, "Vertices");
    s->add_option("--attempts", o.graph_attempts, "Edge proposals");
    s->add_option("--colors", o.graph_colors, "Number of colors");
    add(s, "gen graph", cmd_gen_graph);
  }

  {
    CLI::App* s = sub(&app, "validate", "Check an instance file; exit 1 with a counterexample on failure");
    s->add_option("instance", o.input, "Instance file")->required()->check(CLI::ExistingFile);
    s->add_flag("--strict", o.strict, "Also demand a matching for every index");
    add(s, "validate", cmd_validate);
  }
  {
    CLI::App* s = sub(&app, "rainbow", "Exact rainbow-cycle search in a colored graph");
    s->add_option("--graph", o.graph, "Graph JSON file")->required()->check(CLI::ExistingFile);
    add(s, "rainbow", cmd_rainbow);
  }
  {
    CLI::App* s = sub(&app, "even-cover", "Exact rainbow even cover search in colored matchings");
    s->add_option("matchings", o.input, "Matchings JSON or instance file")->required()->check(CLI::ExistingFile);
    add(s, "even-cover", cmd_even_cover);
  }
  {
    CLI::App* s = sub(&app, "direct-sum", "Direct-sum graph on l-subsets, rainbow cycle search and lift to a cover");
    s->add_option("matchings", o.input, "Matchings JSON or instance file")->required()->check(CLI::ExistingFile);
    s->add_option("--ell", o.ell, "Subset size l");
    s->add_flag("--build-only", o.build_only, "Build (and write with --out) the graph without searching");
    add(s, "direct-sum", cmd_direct_sum);
  }

  auto compress_flags = [&](CLI::App* s) {
    s->add_option("instance", o.input, "LCC instance file")->required()->check(CLI::ExistingFile);
    s->add_option("--samples", o.samples, "Number of sampled targets");
    s->add_option("--min-part-size", o.min_part_size, "Smallest part of a split");
    s->add_option("--p", o.p, "Number of parts (0: ceil(4/delta), clipped)");
    s->add_option("--max-rounds", o.max_rounds, "Consecutive failed reseedings before stopping");
    s->add_option("--coverage-target", o.coverage_target, "Stop coverage at this |W| (0: ceil(delta n / 2))");
    s->add_option("--parallel", o.parallel, "Worker threads over rows (marked nondeterministic in the manifest)")
        ->check(CLI::Range(1U, 256U));
  };
  {
    CLI::App* s = sub(&app, "compress", "Compress representations of given or sampled targets");
    compress_flags(s);
    s->add_option("--x", o.x, "Single target as hex (byte 0 first, LSB first)");
    s->add_option("--random-support", o.random_support, "Start from L random matched rows instead of a pivot solve");
    add(s, "compress", [](Ctx& c) { return cmd_compress(c, false); });
  }
  {
    CLI::App* s = sub(&app, "cover", "Covering-radius experiment: compress all targets or a sample");
    compress_flags(s);
    s->add_flag("--exhaustive", o.exhaustive, "Enumerate all of F2^k (k <= 20)");
    add(s, "cover", [](Ctx& c) { return cmd_compress(c, true); });
  }

  CLI::App* ldc = sub(&app, "ldc", "Path-coupling contraction on 2-query LDCs");
  ldc->require_subcommand(1);
  auto ldc_flags = [&](CLI::App* s) {
    s->add_option("instance", o.input, "LDC instance file")->required()->check(CLI::ExistingFile);
    s->add_option("--samples", o.samples, "Number of sampled vectors");
    s->add_option("--x", o.x, "Single vector as comma-separated residues");
    s->add_option("--retry-budget", o.retry_budget, "Chain draws per step (0: 64 ceil(q / 2 delta))");
    s->add_option("--parallel", o.parallel, "Worker threads over rows")->check(CLI::Range(1U, 256U));
  };
  {
    CLI::App* s = sub(ldc, "contract", "One contraction step per vector");
    ldc_flags(s);
    add(s, "ldc contract", [](Ctx& c) { return cmd_ldc(c, false); });
  }
  {
    CLI::App* s = sub(ldc, "span", "Sparse spanning combination by repeated contraction");
    ldc_flags(s);
    s->add_flag("--approx", o.approx, "Stop once the residual weight is at most k/4");
    add(s, "ldc span", [](Ctx& c) { return cmd_ldc(c, true); });
  }

  {
    CLI::App* s = sub(&app, "bench", "Time the scalar and SIMD bit kernels and check they agree");
    s->add_option("--words", o.words, "Words per vector");
    s->add_option("--iterations", o.iterations, "Repetitions per kernel");
    s->add_option("--dim", o.dim, "Side of the random matrix for the rank timing");
    add(s, "bench", cmd_bench);
  }
  {
    CLI::App* s = sub(&app, "replay", "Regenerate a CSV from its manifest and compare byte for byte");
    s->add_option("manifest", o.manifest, "Manifest file written next to a CSV")->required()->check(CLI::ExistingFile);
    s->add_option("--row", o.row, "Only regenerate rows with this x_id");
    add(s, "replay", cmd_replay);
  }
  return b;
}

void collect_help(CLI::App* a, const std::string& path, std::vector<HelpEntry>& out) {
  HelpEntry e;
  e.path = path;
  e.help = a->help();
  for (const CLI::Option* opt : a->get_options()) {
    if (opt->get_group().empty()) continue;
    for (const std::string& name : opt->get_lnames()) e.flags.push_back("--" + name);
  }
  out.push_back(std::move(e));
  for (CLI::App* s : a->get_subcommands({})) collect_help(s, path.empty() ? s->get_name() : path + " " + s->get_name(), out);
}

}  // namespace

std::vector<HelpEntry> help_entries() {
  Options o;
  AppBundle b = build_app(o);
  std::vector<HelpEntry> entries;
  collect_help(b.app.get(), "", entries);
  return entries;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  AppBundle b = build_app(o);
  CLI::App& app = *b.app;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    // help() descends into the selected subcommand.
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << LCC_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "lcctool: " << e.what() << "\n";
    return kExitInput;
  }

  const Command* chosen = nullptr;
  for (const Command& cmd : b.commands)
    if (cmd.app->parsed()) chosen = &cmd;
  if (chosen == nullptr) {
    err << "lcctool: no command given\n";
    return kExitInput;
  }
  Ctx ctx{o, out, err, args, app, *chosen->app, chosen->name};
  try {
    return chosen->handler(ctx);
  } catch (const ParseError& e) {
    err << "lcctool: parse error: " << e.what() << "\n";
    return kExitInput;
  } catch (const VersionError& e) {
    err << "lcctool: version error: " << e.what() << "\n";
    return kExitInput;
  } catch (const StructuralError& e) {
    err << "lcctool: malformed instance: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "lcctool: I/O error: " << e.what() << "\n";
    return kExitInput;
  } catch (const GenerationError& e) {
    err << "lcctool: generation failed: " << e.what() << " (achieved " << e.achieved() << ")\n";
    return kExitBudget;
  } catch (const ContractionFailure& e) {
    err << "lcctool: " << e.what() << "\n";
    return kExitBudget;
  } catch (const InvariantViolation& e) {
    err << "lcctool: internal check failed: " << e.what() << "\n";
    return kExitValidation;
  } catch (const PreconditionError& e) {
    err << "lcctool: precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::domain_error& e) {
    err << "lcctool: precondition: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "lcctool: error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace lcctool
