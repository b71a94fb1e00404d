#pragma once

// Delay measurement and benchmark reporting. Delays are wall-clock times
// between consecutive iterator returns; the run is repeated and the median
// per result index is kept, which suppresses scheduler and interrupt
// outliers. Preprocessing is timed separately, once per repetition.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "spanner/core.hpp"

namespace spanner {

// I.i.d. uniform bytes over a DNA-like 4-letter alphabet.
inline std::string synth_document(size_t bytes, uint64_t seed,
                                  std::string_view alphabet = "ACGT") {
  std::mt19937_64 rng(seed);
  std::string doc(bytes, 'A');
  for (size_t i = 0; i < bytes; ++i) doc[i] = alphabet[rng() % alphabet.size()];
  return doc;
}

// Lowercase noise with `needle` planted at every multiple of `spacing`. An
// uppercase needle cannot occur in the noise, so the planted occurrences are
// the only matches, which pins the matching density exactly.
inline std::string synth_document_planted(size_t bytes, uint64_t seed,
                                          const std::string& needle, size_t spacing) {
  std::string doc = synth_document(bytes, seed, "acgt");
  for (size_t at = spacing; at + needle.size() < bytes; at += spacing) {
    doc.replace(at, needle.size(), needle);
  }
  return doc;
}

struct ResultStream {
  virtual ~ResultStream() = default;
  virtual std::optional<Mapping> next() = 0;
};

struct DelayProfile {
  std::vector<double> median_delay_ns;  // per result index
  uint32_t runs = 0;
  double preprocess_ms = 0;  // median across repetitions

  double max_delay_ns() const {
    double m = 0;
    for (double d : median_delay_ns) m = std::max(m, d);
    return m;
  }
  double avg_delay_ns() const {
    if (median_delay_ns.empty()) return 0;
    double s = 0;
    for (double d : median_delay_ns) s += d;
    return s / static_cast<double>(median_delay_ns.size());
  }
};

// Runs `make_stream` (the preprocessing) and drains the stream `runs` times.
// The result order must be identical across repetitions; a mismatch throws.
inline DelayProfile measure_delays(const std::function<std::unique_ptr<ResultStream>()>& make_stream,
                                   uint32_t runs) {
  SPANNER_ASSERT(runs >= 1, "measure_delays needs at least one run");
  using clock = std::chrono::steady_clock;
  std::vector<std::vector<double>> delays(runs);
  std::vector<double> prep_ms(runs);
  std::vector<Mapping> first_order;

  for (uint32_t r = 0; r < runs; ++r) {
    auto t0 = clock::now();
    std::unique_ptr<ResultStream> stream = make_stream();
    auto t1 = clock::now();
    prep_ms[r] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    size_t index = 0;
    auto last = clock::now();
    while (auto m = stream->next()) {
      auto now = clock::now();
      delays[r].push_back(std::chrono::duration<double, std::nano>(now - last).count());
      last = now;
      if (r == 0) {
        first_order.push_back(std::move(*m));
      } else {
        if (index >= first_order.size() || first_order[index] != *m) {
          throw std::runtime_error("nondeterministic result order detected");
        }
      }
      ++index;
    }
    if (r > 0 && index != first_order.size()) {
      throw std::runtime_error("nondeterministic result order detected");
    }
  }

  DelayProfile p;
  p.runs = runs;
  std::vector<double> sorted_prep = prep_ms;
  std::sort(sorted_prep.begin(), sorted_prep.end());
  p.preprocess_ms = sorted_prep[sorted_prep.size() / 2];
  size_t count = delays[0].size();
  p.median_delay_ns.resize(count);
  std::vector<double> column(runs);
  for (size_t i = 0; i < count; ++i) {
    for (uint32_t r = 0; r < runs; ++r) column[r] = delays[r][i];
    std::sort(column.begin(), column.end());
    p.median_delay_ns[i] = column[runs / 2];
  }
  return p;
}

// CSV rows `bucket_lower_ns,count`; buckets cover [min, max] and the counts
// sum to the number of results.
inline std::vector<std::pair<int64_t, uint64_t>> emit_histogram(const DelayProfile& profile,
                                                                double bucket_width_ns) {
  if (bucket_width_ns <= 0) throw std::invalid_argument("bucket width must be positive");
  std::vector<std::pair<int64_t, uint64_t>> rows;
  if (profile.median_delay_ns.empty()) return rows;
  double lo = profile.median_delay_ns[0], hi = lo;
  for (double d : profile.median_delay_ns) {
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  size_t buckets = static_cast<size_t>((hi - lo) / bucket_width_ns) + 1;
  std::vector<uint64_t> counts(buckets, 0);
  for (double d : profile.median_delay_ns) {
    size_t b = static_cast<size_t>((d - lo) / bucket_width_ns);
    counts[std::min(b, buckets - 1)]++;
  }
  for (size_t b = 0; b < buckets; ++b) {
    rows.emplace_back(static_cast<int64_t>(lo + double(b) * bucket_width_ns), counts[b]);
  }
  return rows;
}

struct BenchReport {
  size_t doc_bytes = 0;
  std::string pattern;
  double preproc_ms = 0;
  uint64_t results = 0;
  double avg_delay_ns = 0;
  double max_delay_ns = 0;
  size_t dag_bytes = 0, jump_bytes = 0, matrix_bytes = 0;

  static std::string csv_header() {
    return "doc_bytes,pattern,preproc_ms,results,avg_delay_ns,max_delay_ns,"
           "dag_bytes,jump_bytes,matrix_bytes";
  }
  std::string csv_row() const {
    // The pattern field is quoted; embedded quotes are doubled per RFC 4180.
    std::string quoted = "\"";
    for (char c : pattern) {
      quoted += c;
      if (c == '"') quoted += '"';
    }
    quoted += '"';
    char buf[512];
    std::snprintf(buf, sizeof buf, "%zu,%s,%.3f,%llu,%.1f,%.1f,%zu,%zu,%zu", doc_bytes,
                  quoted.c_str(), preproc_ms, static_cast<unsigned long long>(results),
                  avg_delay_ns, max_delay_ns, dag_bytes, jump_bytes, matrix_bytes);
    return buf;
  }
};

}  // namespace spanner
