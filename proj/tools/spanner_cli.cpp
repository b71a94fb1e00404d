// Command-line front end: compile a pattern, evaluate it over a document,
// and stream the extracted mappings; optionally benchmark the run.
//
// Exit codes: 0 success (including zero results), 1 pattern error, 2 I/O
// error, 3 engine constraint violated (unsupported engine/pattern pairing or
// a budget overrun), 4 verification mismatch against the oracle.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spanner/spanner.hpp"

namespace {

using namespace spanner;

struct Options {
  std::string pattern;
  std::string file;
  std::string engine = "general";
  std::string format = "spans";
  uint64_t limit = 0;
  bool has_limit = false;
  bool count_only = false;
  uint32_t bench_runs = 0;
  std::string histogram_path;
  bool verify = false;
  uint64_t seed = 1;
  uint64_t synth_bytes = 0;
};

std::string format_mapping(const Mapping& m, const std::vector<std::string>& names,
                           const std::string& format) {
  std::string out;
  if (format == "pairs") {
    for (size_t i = 0; i < m.size(); ++i) {
      if (i) out += ' ';
      out += marker_name(m[i].marker, names) + "@" + std::to_string(m[i].pos);
    }
    return out;
  }
  // Group the pairs into per-variable spans (both ends are present in any
  // valid mapping).
  std::vector<std::array<uint32_t, 2>> spans(names.size(), {UINT32_MAX, UINT32_MAX});
  for (const auto& p : m) {
    VarId v = marker_var(p.marker);
    spans[v][is_close(p.marker) ? 1 : 0] = p.pos;
  }
  if (format == "jsonl") {
    out += '{';
    bool first = true;
    for (size_t v = 0; v < spans.size(); ++v) {
      if (spans[v][0] == UINT32_MAX) continue;
      if (!first) out += ',';
      first = false;
      out += '"' + names[v] + "\":[" + std::to_string(spans[v][0]) + ',' +
             std::to_string(spans[v][1]) + ']';
    }
    out += '}';
    return out;
  }
  // spans (default)
  bool first = true;
  for (size_t v = 0; v < spans.size(); ++v) {
    if (spans[v][0] == UINT32_MAX) continue;
    if (!first) out += ' ';
    first = false;
    out += names[v] + ":[" + std::to_string(spans[v][0]) + ',' +
           std::to_string(spans[v][1]) + ')';
  }
  return out;
}

struct GeneralStream : ResultStream {
  MappingDag dag;
  JumpIndex idx;
  std::optional<MappingEnumerator> en;
  explicit GeneralStream(MappingDag d)
      : dag(std::move(d)), idx(JumpIndex::build(dag)) {
    en.emplace(dag, idx);
  }
  std::optional<Mapping> next() override { return dag.empty() ? std::nullopt : en->next(); }
};

struct NaiveStream : ResultStream {
  NaiveSpanner spanner;
  std::string_view doc;
  std::optional<NaiveSpanner::Cursor> cur;
  NaiveStream(NaiveSpanner s, std::string_view d) : spanner(std::move(s)), doc(d) {
    cur.emplace(spanner, doc);
  }
  std::optional<Mapping> next() override {
    auto span = cur->next();
    if (!span) return std::nullopt;
    return Mapping{{open_marker(0), span->first}, {close_marker(0), span->second}};
  }
};

struct SetStream : ResultStream {
  std::vector<Mapping> items;
  size_t at = 0;
  std::optional<Mapping> next() override {
    if (at >= items.size()) return std::nullopt;
    return items[at++];
  }
};

int run(const Options& opt) {
  // Document.
  std::string doc;
  if (opt.synth_bytes > 0) {
    doc = synth_document(opt.synth_bytes, opt.seed);
  } else if (!opt.file.empty()) {
    std::ifstream in(opt.file, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot open " << opt.file << "\n";
      return 2;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
      std::cerr << "error: cannot read " << opt.file << "\n";
      return 2;
    }
    doc = std::move(ss).str();
  } else {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    doc = std::move(ss).str();
  }

  // Pattern -> trimmed sequential VA.
  RegexFormula formula;
  VarAutomaton va;
  try {
    formula = parse_regex_formula(opt.pattern);
    va = trim_va(compile_to_va(formula));
    if (!va.empty() && !check_sequential(va).ok) {
      va = make_sequential(va);
    }
  } catch (const ParseError& e) {
    std::cerr << "pattern error: " << e.what() << "\n";
    return 1;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  const std::vector<std::string>& names = va.var_names;

  auto make_stream = [&]() -> std::unique_ptr<ResultStream> {
    if (opt.engine == "general") {
      return std::make_unique<GeneralStream>(
          trim_dag(build_product_dag(std::make_shared<VarAutomaton>(va), doc)));
    }
    if (opt.engine == "extended") {
      auto eva = std::make_shared<ExtendedVA>(to_extended_va(va));
      return std::make_unique<GeneralStream>(
          trim_dag(build_product_dag_extended(std::move(eva), doc)));
    }
    if (opt.engine == "naive") {
      return std::make_unique<NaiveStream>(NaiveSpanner::compile(formula), doc);
    }
    // oracle
    auto s = std::make_unique<SetStream>();
    for (const auto& m : oracle_enumerate(va, doc)) s->items.push_back(m);
    return s;
  };

  try {
    if (opt.bench_runs > 0) {
      JumpIndex::Bytes bytes;
      auto factory = [&]() -> std::unique_ptr<ResultStream> {
        auto s = make_stream();
        if (auto* g = dynamic_cast<GeneralStream*>(s.get())) bytes = g->idx.bytes();
        return s;
      };
      DelayProfile profile = measure_delays(factory, opt.bench_runs);
      BenchReport report;
      report.doc_bytes = doc.size();
      report.pattern = opt.pattern;
      report.preproc_ms = profile.preprocess_ms;
      report.results = profile.median_delay_ns.size();
      report.avg_delay_ns = profile.avg_delay_ns();
      report.max_delay_ns = profile.max_delay_ns();
      report.dag_bytes = bytes.dag;
      report.jump_bytes = bytes.jump;
      report.matrix_bytes = bytes.matrices;
      std::cout << BenchReport::csv_header() << "\n" << report.csv_row() << "\n";
      if (!opt.histogram_path.empty()) {
        std::ofstream out(opt.histogram_path);
        if (!out) {
          std::cerr << "error: cannot write " << opt.histogram_path << "\n";
          return 2;
        }
        out << "bucket_lower_ns,count\n";
        if (!profile.median_delay_ns.empty()) {
          double lo = profile.median_delay_ns[0], hi = lo;
          for (double d : profile.median_delay_ns) {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
          }
          double width = std::max(1.0, (hi - lo) / 50.0);
          for (auto& [lower, count] : emit_histogram(profile, width)) {
            out << lower << ',' << count << "\n";
          }
        }
      }
      return 0;
    }

    if (opt.verify) {
      std::set<Mapping> got;
      auto stream = make_stream();
      while (auto m = stream->next()) got.insert(std::move(*m));
      std::set<Mapping> expected = oracle_enumerate(va, doc);
      if (got != expected) {
        std::cerr << "verification failed: engine produced " << got.size()
                  << " mappings, oracle " << expected.size() << "\n";
        return 4;
      }
      std::cerr << "verified " << got.size() << " mappings against the oracle\n";
    }

    auto stream = make_stream();
    uint64_t count = 0;
    while (auto m = stream->next()) {
      ++count;
      if (!opt.count_only) {
        std::cout << format_mapping(*m, names, opt.format) << "\n";
      }
      if (opt.has_limit && count >= opt.limit) break;
    }
    if (opt.count_only) std::cout << count << "\n";
    return 0;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"document spanner evaluation engine"};
  app.add_option("-e,--pattern", opt.pattern, "pattern to evaluate")->required();
  app.add_option("-f,--file", opt.file, "input document (default: standard input)");
  app.add_option("--engine", opt.engine, "general | extended | naive | oracle")
      ->check(CLI::IsMember({"general", "extended", "naive", "oracle"}));
  app.add_option("--format", opt.format, "spans | pairs | jsonl")
      ->check(CLI::IsMember({"spans", "pairs", "jsonl"}));
  auto* limit_opt = app.add_option("--limit", opt.limit, "stop after N results");
  app.add_flag("--count-only", opt.count_only, "print only the number of results");
  app.add_option("--bench", opt.bench_runs, "repeat the run N times and report delays");
  app.add_option("--histogram", opt.histogram_path, "write a delay histogram CSV");
  app.add_flag("--verify", opt.verify, "cross-check the engine against the oracle");
  app.add_option("--seed", opt.seed, "seed for synthetic documents");
  app.add_option("--synth", opt.synth_bytes, "generate a synthetic document of N bytes");
  CLI11_PARSE(app, argc, argv);
  opt.has_limit = limit_opt->count() > 0;
  try {
    return run(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
