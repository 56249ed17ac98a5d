#pragma once

// Record serialization (CSV and JSONL) and the append-only resume cache.
//
// CSV columns, fixed order:
//   n,h,omega,count,s,parity_expected,parity_match,anomaly,passing_codes
// s and parity_match are empty when absent; passing_codes is a
// semicolon-joined list of base-4 assignment codes printed in decimal.
// JSONL mirrors the CSV fields with null for absent values.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "selmer/stats.hpp"

namespace selmer {

inline constexpr int kCacheSchemaVersion = 1;

std::string csv_header();
std::string to_csv_line(const ScanRecord& r);
std::optional<ScanRecord> from_csv_line(std::string_view line);

std::string to_jsonl_line(const ScanRecord& r);
std::optional<ScanRecord> from_jsonl_line(std::string_view line);

// Cache lines are JSONL plus a schema tag and the equivalence status, so a
// resumed scan reproduces summary counters as well as records.
std::string to_cache_line(const ScanRecord& r);
std::optional<ScanRecord> from_cache_line(std::string_view line);

struct CacheLoadResult {
  std::map<uint64_t, ScanRecord> records;  // last write per n wins
  size_t corrupt_lines = 0;
  size_t foreign_lines = 0;  // other class or schema, ignored
};

// A missing file loads as empty; corrupt lines are counted and skipped.
CacheLoadResult load_cache_file(const std::string& path, int h);

}  // namespace selmer
