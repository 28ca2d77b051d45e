#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "mnoswitch/error.hpp"
#include "mnoswitch/latency.hpp"
#include "mnoswitch/random.hpp"

namespace mnoswitch::experiments {

inline constexpr std::string_view kTraceHeader = "location_id,mno_id,tier,rtt_ms";

struct IngestResult {
  LatencyCatalog catalog;
  std::map<LatencyCatalog::Key, std::size_t> counts;  // samples per (location, mno, tier)
  std::size_t rows = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

// Reads RTT samples (CSV with header location_id,mno_id,tier,rtt_ms) and bins
// each (location, mno, tier) cell into a histogram.
inline IngestResult ingest_traces(std::istream& in, double bin_width_ms = kDefaultBinWidthMs) {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::map<LatencyCatalog::Key, std::vector<double>> samples;
  IngestResult out;
  while (std::getline(in, line)) {
    ++lineno;
    const auto view = detail::trim(line);
    if (view.empty()) continue;
    if (!have_header) {
      if (view != kTraceHeader)
        throw ParseError(lineno, "expected header '" + std::string(kTraceHeader) + "'");
      have_header = true;
      continue;
    }
    const auto cols = detail::split_csv(view);
    if (cols.size() != 4) throw ParseError(lineno, "expected 4 columns, got " + std::to_string(cols.size()));
    if (cols[0].empty() || cols[1].empty()) throw ParseError(lineno, "empty location_id or mno_id");
    Tier tier;
    if (cols[2] == "cloud") {
      tier = Tier::cloud;
    } else if (cols[2] == "fog") {
      tier = Tier::fog;
    } else {
      throw ParseError(lineno, "tier must be cloud or fog, got '" + std::string(cols[2]) + "'");
    }
    double rtt = 0.0;
    const auto* first = cols[3].data();
    const auto* last = first + cols[3].size();
    const auto [ptr, ec] = std::from_chars(first, last, rtt);
    if (ec != std::errc() || ptr != last || !std::isfinite(rtt) || rtt < 0.0)
      throw ParseError(lineno, "rtt_ms is not a non-negative number: '" + std::string(cols[3]) + "'");
    samples[{std::string(cols[0]), std::string(cols[1]), tier}].push_back(rtt);
    ++out.rows;
  }
  if (!have_header) throw ParseError(lineno, "missing header");
  for (auto& [key, v] : samples) {
    const auto& [loc, mno, tier] = key;
    out.catalog.insert(loc, mno, tier, from_samples(v, bin_width_ms));
    out.counts[key] = v.size();
  }
  out.catalog.require_complete();
  return out;
}

inline IngestResult ingest_traces(const std::filesystem::path& path, double bin_width_ms = kDefaultBinWidthMs) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trace file '" + path.string() + "'");
  return ingest_traces(in, bin_width_ms);
}

// Writes `per_cell` draws from every distribution of `catalog` as a trace CSV.
inline void write_synthetic_traces(std::ostream& out, const LatencyCatalog& catalog, std::size_t per_cell,
                                   Rng& rng) {
  out << kTraceHeader << '\n';
  for (const auto& [key, dist] : catalog) {
    const auto& [loc, mno, tier] = key;
    for (std::size_t i = 0; i < per_cell; ++i)
      out << loc << ',' << mno << ',' << to_string(tier) << ',' << sample(dist, rng) << '\n';
  }
}

}  // namespace mnoswitch::experiments
