#include "selmer/stats.hpp"

#include <atomic>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace selmer {

Rational Rational::reduced(uint64_t num, uint64_t den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  uint64_t g = std::gcd(num, den);
  return Rational{num / g, den / g};
}

std::string Rational::pq() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

std::string Rational::decimal(int digits) const {
  unsigned __int128 scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  unsigned __int128 scaled = static_cast<unsigned __int128>(num) * scale;
  unsigned __int128 q = scaled / den;
  if (2 * (scaled % den) >= den) ++q;  // round half up
  uint64_t whole = static_cast<uint64_t>(q / scale);
  uint64_t frac = static_cast<uint64_t>(q % scale);
  std::string f = std::to_string(frac);
  f.insert(0, static_cast<size_t>(digits) - f.size(), '0');
  return std::to_string(whole) + "." + f;
}

Parity parity_expected(int n_mod_24) {
  switch (n_mod_24) {
    case 1: case 2: case 3: case 5: case 7: case 9: case 14: case 15: case 19:
      return Parity::kEven;
    case 6: case 10: case 11: case 13: case 17: case 18: case 21: case 22:
    case 23:
      return Parity::kOdd;
    default:
      throw std::domain_error("parity_expected: residue " +
                              std::to_string(n_mod_24) +
                              " is outside the quoted table");
  }
}

std::optional<Rational> ScanSummary::average() const {
  if (member_count == 0) return std::nullopt;
  return Rational::reduced(sum_of_counts, member_count);
}

std::optional<Rational> ScanSummary::parity_match_fraction() const {
  if (parity_defined == 0) return std::nullopt;
  return Rational::reduced(parity_matched, parity_defined);
}

Rational ScanSummary::density_s02() const {
  if (member_count == 0) return Rational{0, 1};
  uint64_t c = 0;
  for (int s : {0, 2})
    if (auto it = s_histogram.find(s); it != s_histogram.end()) c += it->second;
  return Rational::reduced(c, member_count);
}

Rational ScanSummary::density_s13() const {
  if (member_count == 0) return Rational{0, 1};
  uint64_t c = 0;
  for (int s : {1, 3})
    if (auto it = s_histogram.find(s); it != s_histogram.end()) c += it->second;
  return Rational::reduced(c, member_count);
}

ScanSummary merge(const ScanSummary& a, const ScanSummary& b) {
  if (a.h != b.h) throw std::invalid_argument("merge: class mismatch");
  ScanSummary m = a;
  m.x_max = std::max(a.x_max, b.x_max);
  m.member_count += b.member_count;
  m.sum_of_counts += b.sum_of_counts;
  for (const auto& [s, c] : b.s_histogram) m.s_histogram[s] += c;
  m.anomalous_count_sum += b.anomalous_count_sum;
  m.anomaly_records += b.anomaly_records;
  m.max_omega = std::max(a.max_omega, b.max_omega);
  m.parity_defined += b.parity_defined;
  m.parity_matched += b.parity_matched;
  m.equivalence_checked += b.equivalence_checked;
  m.equivalence_passed += b.equivalence_passed;
  m.equivalence_skipped += b.equivalence_skipped;
  return m;
}

ScanSummary summarize(const std::vector<ScanRecord>& records, FamilyClass h,
                      uint64_t x_max) {
  ScanSummary sum;
  sum.h = class_value(h);
  sum.x_max = x_max;
  for (const ScanRecord& r : records) {
    ++sum.member_count;
    sum.sum_of_counts += r.count;
    if (r.s) {
      ++sum.s_histogram[*r.s];
    } else {
      sum.anomalous_count_sum += r.count;
    }
    if (r.anomaly != 0) ++sum.anomaly_records;
    sum.max_omega = std::max(sum.max_omega, r.omega);
    if (r.parity_match) {
      ++sum.parity_defined;
      if (*r.parity_match) ++sum.parity_matched;
    }
    switch (r.equivalence) {
      case EquivalenceStatus::kPassed:
        ++sum.equivalence_checked;
        ++sum.equivalence_passed;
        break;
      case EquivalenceStatus::kFailed:
        ++sum.equivalence_checked;
        break;
      case EquivalenceStatus::kSkipped:
        ++sum.equivalence_skipped;
        break;
      case EquivalenceStatus::kNotSampled:
        break;
    }
  }
  return sum;
}

ScanRecord compute_record(const Factorization& f, FamilyClass h,
                          const ScanOptions& options) {
  DescentResult d = relaxed_count(f);
  ScanRecord r;
  r.n = f.value;
  r.h = class_value(h);
  r.omega = f.omega;
  r.count = d.count;
  r.s = d.s;
  r.anomaly = d.anomaly;
  r.passing = std::move(d.passing);
  r.parity_expected_even =
      parity_expected(static_cast<int>(f.mod24)) == Parity::kEven;
  if (r.s) {
    r.parity_match = (*r.s % 2 == 0) == r.parity_expected_even;
  }
  if (options.check_equivalence) {
    bool sampled =
        f.omega <= 3 ||
        (options.sample_modulus > 1 &&
         f.value % static_cast<uint64_t>(options.sample_modulus) ==
             static_cast<uint64_t>(r.h) %
                 static_cast<uint64_t>(options.sample_modulus));
    if (sampled) {
      GSumOutcome g = count_via_g(f, options.g_omega_budget);
      switch (g.status) {
        case GSumOutcome::Status::kOk:
          r.equivalence = g.count == r.count ? EquivalenceStatus::kPassed
                                             : EquivalenceStatus::kFailed;
          break;
        case GSumOutcome::Status::kOverBudget:
          r.equivalence = EquivalenceStatus::kSkipped;
          break;
        case GSumOutcome::Status::kNotDivisible:
          r.equivalence = EquivalenceStatus::kFailed;
          break;
      }
    }
  }
  return r;
}

ScanOutput scan_range(uint64_t lo, uint64_t hi, FamilyClass h,
                      const SpfTable& table, const ScanOptions& options) {
  std::vector<Factorization> members = stream_members_range(lo, hi, h, table);
  ScanOutput out;
  out.records.resize(members.size());

  int jobs = std::max(1, options.jobs);
  if (jobs == 1 || members.size() < 2) {
    for (size_t i = 0; i < members.size(); ++i)
      out.records[i] = compute_record(members[i], h, options);
  } else {
    // Records land in their member's slot, so output order is independent
    // of scheduling.
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= members.size()) return;
        out.records[i] = compute_record(members[i], h, options);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  out.summary = summarize(out.records, h, hi);
  return out;
}

ScanOutput scan(uint64_t x_max, FamilyClass h, const SpfTable& table,
                const ScanOptions& options) {
  return scan_range(0, x_max, h, table, options);
}

std::vector<TrendRow> trend_report(
    const std::vector<ScanSummary>& checkpoints) {
  for (size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i].x_max <= checkpoints[i - 1].x_max)
      throw std::invalid_argument("trend_report: checkpoints not ascending");
  }
  std::vector<TrendRow> rows;
  rows.reserve(checkpoints.size());
  for (const ScanSummary& c : checkpoints) {
    TrendRow row;
    row.x_max = c.x_max;
    row.member_count = c.member_count;
    row.average = c.average();
    if (row.average) {
      row.average_decimal = row.average->decimal(6);
      // |sum - 9 m| / m, exactly.
      uint64_t nine_m = 9 * c.member_count;
      uint64_t gap = c.sum_of_counts > nine_m ? c.sum_of_counts - nine_m
                                              : nine_m - c.sum_of_counts;
      row.gap_decimal = Rational::reduced(gap, c.member_count).decimal(6);
    } else {
      row.average_decimal = "n/a";
      row.gap_decimal = "n/a";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

DensityReport density_report(const ScanSummary& summary) {
  DensityReport rep;
  rep.h = summary.h;
  rep.density_02 = summary.density_s02();
  rep.density_13 = summary.density_s13();
  uint64_t other = summary.member_count;
  if (summary.member_count != 0) {
    // density_other = 1 - density_02 - density_13, kept exact via counts.
    uint64_t c02 = 0, c13 = 0;
    for (const auto& [s, c] : summary.s_histogram) {
      if (s == 0 || s == 2) c02 += c;
      if (s == 1 || s == 3) c13 += c;
    }
    other = summary.member_count - c02 - c13;
    rep.density_other = Rational::reduced(other, summary.member_count);
  } else {
    rep.density_other = Rational{0, 1};
  }
  rep.reference = summary.h == 5 ? "7/16" : "1/3";
  return rep;
}

}  // namespace selmer
