#pragma once

// Range scanning, mergeable aggregation, and the empirical reports: the
// running average of the relaxed count (tracked against the constant 9),
// parity agreement with the quoted mod-24 table, and the s-value densities
// against the 7/16 and 1/3 reference bounds.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "selmer/descent.hpp"
#include "selmer/family.hpp"

namespace selmer {

// Exact nonnegative rational; averages stay exact until rendered.
struct Rational {
  uint64_t num = 0;
  uint64_t den = 1;

  static Rational reduced(uint64_t num, uint64_t den);
  std::string pq() const;                     // "num/den"
  std::string decimal(int digits = 6) const;  // fixed digits, round half up
  friend bool operator==(const Rational&, const Rational&) = default;
};

enum class Parity { kEven, kOdd };

// The quoted parity table mod 24: even for 1,2,3,5,7,9,14,15,19 and odd for
// 6,10,11,13,17,18,21,22,23. Other residues are rejected (std::domain_error).
Parity parity_expected(int n_mod_24);

enum class EquivalenceStatus : uint8_t {
  kNotSampled = 0,
  kPassed = 1,
  kFailed = 2,
  kSkipped = 3,  // over the work budget
};

struct ScanRecord {
  uint64_t n = 0;
  int h = 0;
  int omega = 0;
  uint64_t count = 0;
  std::optional<int> s;
  bool parity_expected_even = false;
  std::optional<bool> parity_match;  // present iff s is present
  uint8_t anomaly = 0;
  std::vector<uint64_t> passing;
  EquivalenceStatus equivalence = EquivalenceStatus::kNotSampled;

  friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

struct ScanSummary {
  int h = 0;
  uint64_t x_max = 0;
  uint64_t member_count = 0;
  uint64_t sum_of_counts = 0;
  std::map<int, uint64_t> s_histogram;
  uint64_t anomalous_count_sum = 0;  // counts of records without s
  uint64_t anomaly_records = 0;
  int max_omega = 0;
  uint64_t parity_defined = 0;
  uint64_t parity_matched = 0;
  uint64_t equivalence_checked = 0;
  uint64_t equivalence_passed = 0;
  uint64_t equivalence_skipped = 0;

  std::optional<Rational> average() const;  // sum_of_counts / member_count
  std::optional<Rational> parity_match_fraction() const;
  Rational density_s02() const;  // members with s in {0, 2}
  Rational density_s13() const;  // members with s in {1, 3}

  friend bool operator==(const ScanSummary&, const ScanSummary&) = default;
};

// Merge of summaries over disjoint ranges; h must agree.
ScanSummary merge(const ScanSummary& a, const ScanSummary& b);

ScanSummary summarize(const std::vector<ScanRecord>& records, FamilyClass h,
                      uint64_t x_max);

struct ScanOptions {
  int jobs = 1;
  bool check_equivalence = true;
  // Members with omega <= 3 are always checked; larger omega is sampled
  // when n = h (mod sample_modulus).
  int sample_modulus = 64;
  int g_omega_budget = kDefaultGSumOmegaBudget;
};

struct ScanOutput {
  std::vector<ScanRecord> records;  // ascending n
  ScanSummary summary;
};

// One record per family member; deterministic regardless of worker count.
ScanRecord compute_record(const Factorization& f, FamilyClass h,
                          const ScanOptions& options);

ScanOutput scan(uint64_t x_max, FamilyClass h, const SpfTable& table,
                const ScanOptions& options = {});

// Members in (lo, hi]; concatenation over a partition equals the full scan.
ScanOutput scan_range(uint64_t lo, uint64_t hi, FamilyClass h,
                      const SpfTable& table, const ScanOptions& options = {});

struct TrendRow {
  uint64_t x_max = 0;
  uint64_t member_count = 0;
  std::optional<Rational> average;
  std::string average_decimal;  // 6 digits, "n/a" when undefined
  std::string gap_decimal;      // |average - 9|, 6 digits
};

// Checkpoints must be ascending in x_max; no convergence assertion is made.
std::vector<TrendRow> trend_report(const std::vector<ScanSummary>& checkpoints);

struct DensityReport {
  int h = 0;
  Rational density_02;
  Rational density_13;
  Rational density_other;
  // Reference bounds from the density corollaries; informational only
  // (relaxed s-values, not true Selmer ranks).
  std::string reference;  // "7/16" for h = 5, "1/3" for h = 13
};

DensityReport density_report(const ScanSummary& summary);

}  // namespace selmer
