// Command-line surface for the relaxed 2-Selmer scanner.
//
// Exit codes: 0 success, 1 mathematical finding, 2 domain rejection,
// 3 infrastructure failure.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "selmer/descent.hpp"
#include "selmer/family.hpp"
#include "selmer/io.hpp"
#include "selmer/oracle.hpp"
#include "selmer/stats.hpp"

namespace {

using namespace selmer;

constexpr int kExitOk = 0;
constexpr int kExitFinding = 1;
constexpr int kExitRejected = 2;
constexpr int kExitInfra = 3;

std::string part_tuple(const Quadruple& q) {
  std::ostringstream os;
  os << "(" << q.parts[0] << ", " << q.parts[1] << ", " << q.parts[2] << ", "
     << q.parts[3] << ")";
  return os.str();
}

std::string set_names(uint8_t sets, int n) {
  static const char* names[] = {"i", "ii", "iii", "iv"};
  std::string out;
  for (int b = 0; b < n; ++b) {
    if (sets & (1 << b)) {
      if (!out.empty()) out += ",";
      out += names[b];
    }
  }
  return out.empty() ? "-" : out;
}

std::string default_cache_path(int h) {
  std::string dir = ".";
  if (const char* env = std::getenv("SELMERSCAN_CACHE_DIR")) dir = env;
  return dir + "/scan-cache-h" + std::to_string(h) + ".jsonl";
}

template <typename Fn>
void parallel_members(const std::vector<Factorization>& members, int jobs,
                      Fn&& fn) {
  if (jobs <= 1) {
    for (const auto& f : members) fn(f);
    return;
  }
  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      size_t i = cursor.fetch_add(1);
      if (i >= members.size()) return;
      fn(members[i]);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// --- selmer N --class H --------------------------------------------------

int cmd_selmer(uint64_t n, int h_int) {
  FamilyClass h = family_class_from_int(h_int);
  SpfTable table = build_spf_table(std::max<uint64_t>(n, 2));
  auto check = check_membership(n, table, h);
  if (!check.ok) {
    std::cout << "rejected: " << check.reason << "\n";
    return kExitRejected;
  }
  Factorization f = *factorize(n, table);
  ScanRecord rec = compute_record(f, h, ScanOptions{});

  std::cout << "n = " << n << "  (class " << h_int << ")\n";
  std::cout << "omega = " << f.omega << ", primes =";
  for (uint32_t p : f.prime_span()) std::cout << " " << p;
  std::cout << "\n";
  std::cout << "relaxed count = " << rec.count;
  if (rec.s)
    std::cout << ", s = " << *rec.s;
  else
    std::cout << ", s undefined (count is not a power of two)";
  std::cout << "\n";
  std::cout << "parity expected (mod 24 table): "
            << (rec.parity_expected_even ? "even" : "odd");
  if (rec.parity_match)
    std::cout << ", match = " << (*rec.parity_match ? "yes" : "no");
  std::cout << "\n";
  std::cout << "passing quadruples:\n";
  for (uint64_t code : rec.passing)
    std::cout << "  code " << code << ": "
              << part_tuple(make_quadruple(f, code)) << "\n";
  std::cout << "per-place verdicts:\n";
  uint64_t total = quadruple_count(f);
  for (uint64_t code = 0; code < total; ++code) {
    Quadruple q = make_quadruple(f, code);
    auto [pass, v] = is_everywhere_locally_solvable(q);
    std::cout << "  code " << code << " " << part_tuple(q) << ": odd[";
    for (int k = 0; k < f.omega; ++k) {
      if (k) std::cout << " ";
      std::cout << f.primes[k] << ":" << ((v.odd_ok >> k & 1) ? "ok" : "no");
    }
    std::cout << "] q2{" << set_names(v.q2_sets, 4) << "} q3{"
              << set_names(v.q3_sets, 3) << "} real:"
              << (v.real_ok ? "ok" : "no") << " -> "
              << (pass ? "pass" : "fail") << "\n";
  }
  std::cout << to_jsonl_line(rec) << "\n";
  return kExitOk;
}

// --- scan ------------------------------------------------------------------

int cmd_scan(uint64_t x_max, int h_int, int jobs, const std::string& emit,
             const std::string& out_path, std::string resume_path,
             int sample_modulus) {
  FamilyClass h = family_class_from_int(h_int);
  if (resume_path.empty()) resume_path = default_cache_path(h_int);

  SpfTable table = build_spf_table(std::max<uint64_t>(x_max, 2));
  auto cached = load_cache_file(resume_path, h_int);
  if (cached.corrupt_lines > 0)
    std::cerr << "warning: ignored " << cached.corrupt_lines
              << " corrupt cache line(s) in " << resume_path << "\n";

  auto members = stream_members(x_max, h, table);
  ScanOptions opts;
  opts.jobs = jobs;
  opts.sample_modulus = sample_modulus;

  std::vector<ScanRecord> records(members.size());
  std::vector<size_t> missing;
  for (size_t i = 0; i < members.size(); ++i) {
    auto it = cached.records.find(members[i].value);
    if (it != cached.records.end())
      records[i] = it->second;
    else
      missing.push_back(i);
  }

  std::atomic<size_t> cursor{0};
  auto worker = [&] {
    for (;;) {
      size_t mi = cursor.fetch_add(1);
      if (mi >= missing.size()) return;
      size_t i = missing[mi];
      records[i] = compute_record(members[i], h, opts);
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (!missing.empty()) {
    std::ofstream cache(resume_path, std::ios::app);
    if (!cache) {
      std::cerr << "error: cannot write cache " << resume_path << "\n";
      return kExitInfra;
    }
    for (size_t i : missing) cache << to_cache_line(records[i]) << "\n";
  }

  std::ofstream file;
  std::ostream* sink = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitInfra;
    }
    sink = &file;
  }
  if (emit == "csv") {
    *sink << csv_header() << "\n";
    for (const auto& r : records) *sink << to_csv_line(r) << "\n";
  } else {
    for (const auto& r : records) *sink << to_jsonl_line(r) << "\n";
  }
  if (sink == &file) {
    file.close();
    if (!file) {
      std::cerr << "error: short write to " << out_path << "\n";
      return kExitInfra;
    }
  }

  ScanSummary sum = summarize(records, h, x_max);
  std::cout << "scan: class " << h_int << ", X = " << x_max << "\n";
  std::cout << "members: " << sum.member_count << "\n";
  std::cout << "sum of counts: " << sum.sum_of_counts << "\n";
  if (auto avg = sum.average())
    std::cout << "average count: " << avg->pq() << "\n";
  else
    std::cout << "average count: n/a (0 members)\n";
  std::cout << "s histogram:";
  for (const auto& [s, c] : sum.s_histogram) std::cout << " " << s << ":" << c;
  std::cout << "\n";
  if (auto pf = sum.parity_match_fraction())
    std::cout << "parity match fraction: " << pf->pq() << "\n";
  std::cout << "anomalies: " << sum.anomaly_records << "\n";
  std::cout << "equivalence checked/passed/skipped: "
            << sum.equivalence_checked << "/" << sum.equivalence_passed << "/"
            << sum.equivalence_skipped << "\n";
  if (sum.equivalence_passed != sum.equivalence_checked ||
      sum.anomaly_records != 0) {
    std::cout << "FINDINGS DETECTED\n";
    return kExitFinding;
  }
  return kExitOk;
}

// --- verify ------------------------------------------------------------------

struct VerifyState {
  std::mutex mu;
  uint64_t violations = 0;
  uint64_t checked = 0;
  uint64_t skipped = 0;

  void violation(const std::string& line) {
    std::lock_guard<std::mutex> lock(mu);
    ++violations;
    std::cout << "VIOLATION " << line << "\n";
  }
};

void verify_equivalence(const std::vector<Factorization>& members, int jobs,
                        int budget, VerifyState& st) {
  parallel_members(members, jobs, [&](const Factorization& f) {
    auto direct = relaxed_count(f);
    auto g = count_via_g(f, budget);
    if (g.status == GSumOutcome::Status::kOverBudget) {
      std::lock_guard<std::mutex> lock(st.mu);
      ++st.skipped;
      return;
    }
    {
      std::lock_guard<std::mutex> lock(st.mu);
      ++st.checked;
    }
    if (g.status == GSumOutcome::Status::kNotDivisible) {
      st.violation("equivalence n=" + std::to_string(f.value) +
                   " sign sum not divisible by 4^omega");
    } else if (g.count != direct.count) {
      st.violation("equivalence n=" + std::to_string(f.value) + " direct=" +
                   std::to_string(direct.count) + " g=" +
                   std::to_string(g.count));
    }
  });
}

void verify_oracle(const std::vector<Factorization>& members, int jobs,
                   int depth, VerifyState& st) {
  parallel_members(members, jobs, [&](const Factorization& f) {
    uint64_t total = quadruple_count(f);
    for (uint64_t code = 0; code < total; ++code) {
      Quadruple q = make_quadruple(f, code);
      uint32_t symbol_ok = odd_prime_conditions(q);
      for (int k = 0; k < f.omega; ++k) {
        auto verdict = padic_solvable(q, f.primes[k], depth);
        {
          std::lock_guard<std::mutex> lock(st.mu);
          ++st.checked;
        }
        std::string where = "oracle n=" + std::to_string(f.value) + " code=" +
                            std::to_string(code) + " p=" +
                            std::to_string(f.primes[k]);
        if (verdict.value == Solvability::kInconclusive) {
          st.violation(where + " inconclusive at depth " +
                       std::to_string(depth));
        } else if ((verdict.value == Solvability::kSolvable) !=
                   ((symbol_ok >> k & 1) != 0)) {
          st.violation(where + " oracle disagrees with symbol criterion");
        }
      }
    }
  });
}

void verify_q2q3(const std::vector<Factorization>& members, int jobs,
                 VerifyState& st) {
  parallel_members(members, jobs, [&](const Factorization& f) {
    auto r = relaxed_count(f);
    {
      std::lock_guard<std::mutex> lock(st.mu);
      ++st.checked;
    }
    std::string where = "q2q3 n=" + std::to_string(f.value);
    if (r.count < 1) st.violation(where + " count < 1");
    if (r.anomaly & kAnomalyCountNotPowerOfTwo)
      st.violation(where + " count " + std::to_string(r.count) +
                   " is not a power of two");
    if (r.anomaly & kAnomalyQ2Claim)
      st.violation(where + " some quadruple satisfies neither Q2 ii nor iv");
    if (r.anomaly & kAnomalyQ3Implication)
      st.violation(where + " odd+Q2 passing quadruple fails Q3");
    // (-1/alpha) = 1 on sampled slot assignments.
    uint64_t total = sixteen_count(f);
    uint64_t step = f.omega <= 2 ? 1 : total / 256 + 1;
    for (uint64_t code = 0; code < total; code += step) {
      if (jacobi(-1, make_sixteen(f, code).alpha()) != 1)
        st.violation(where + " (-1/alpha) != 1 at assignment " +
                     std::to_string(code));
    }
  });
}

void verify_points(const std::vector<Factorization>& members, int jobs,
                   uint64_t bound, VerifyState& st) {
  parallel_members(members, jobs, [&](const Factorization& f) {
    uint64_t total = quadruple_count(f);
    for (uint64_t code = 0; code < total; ++code) {
      Quadruple q = make_quadruple(f, code);
      auto sol = search_global(q, bound, /*require_nondegenerate=*/true);
      if (!sol) continue;
      {
        std::lock_guard<std::mutex> lock(st.mu);
        ++st.checked;
      }
      std::string where = "points n=" + std::to_string(f.value) + " code=" +
                          std::to_string(code);
      try {
        RationalPoint p = point_from_solution(*sol);
        if (!on_curve(p)) st.violation(where + " point off curve");
        auto rep = representative_check(p);
        if (!rep.unique)
          st.violation(where + " representative count " +
                       std::to_string(rep.passing_count));
        else if (!rep.v3_ok)
          st.violation(where + " representative has v3(x) > 0");
        if (!rep.product_is_9n4)
          st.violation(where + " x-coordinate product != 9 n^4");
        if (!theta_class_consistent(p, q))
          st.violation(where + " theta-class mismatch");
      } catch (const std::exception& e) {
        st.violation(where + " pipeline threw: " + e.what());
      }
    }
  });
}

int cmd_verify(uint64_t x_max, std::vector<int> classes,
               const std::string& mode, int jobs, int depth, uint64_t bound,
               int budget) {
  SpfTable table = build_spf_table(std::max<uint64_t>(x_max, 2));
  VerifyState st;
  for (int h_int : classes) {
    FamilyClass h = family_class_from_int(h_int);
    auto members = stream_members(x_max, h, table);
    std::cout << "verify: class " << h_int << ", " << members.size()
              << " members up to " << x_max << ", mode " << mode << "\n";
    if (mode == "equivalence" || mode == "all")
      verify_equivalence(members, jobs, budget, st);
    if (mode == "oracle" || mode == "all")
      verify_oracle(members, jobs, depth, st);
    if (mode == "q2q3" || mode == "all") verify_q2q3(members, jobs, st);
    if (mode == "points" || mode == "all")
      verify_points(members, jobs, bound, st);
  }
  std::cout << "checked: " << st.checked << ", skipped: " << st.skipped
            << ", violations: " << st.violations << "\n";
  return st.violations == 0 ? kExitOk : kExitFinding;
}

// --- points ------------------------------------------------------------------

int cmd_points(uint64_t n, int h_int, uint64_t bound) {
  FamilyClass h = family_class_from_int(h_int);
  SpfTable table = build_spf_table(std::max<uint64_t>(n, 2));
  auto check = check_membership(n, table, h);
  if (!check.ok) {
    std::cout << "rejected: " << check.reason << "\n";
    return kExitRejected;
  }
  Factorization f = *factorize(n, table);
  DescentResult local = relaxed_count(f);
  std::cout << "n = " << n << ", coordinate bound " << bound << "\n";
  uint64_t total = quadruple_count(f);
  for (uint64_t code = 0; code < total; ++code) {
    Quadruple q = make_quadruple(f, code);
    bool locally_ok = is_everywhere_locally_solvable(q).first;
    std::cout << "code " << code << " " << part_tuple(q) << ": local "
              << (locally_ok ? "pass" : "fail");
    auto sol = search_global(q, bound);
    if (!sol) {
      std::cout << ", no solution found\n";
      continue;
    }
    std::cout << ", solution (X,W,Y,Z) = (" << sol->x << "," << sol->w << ","
              << sol->y << "," << sol->z << ")"
              << (sol->degenerate ? " degenerate" : "");
    auto nondeg = sol->degenerate
                      ? search_global(q, bound, /*require_nondegenerate=*/true)
                      : sol;
    if (nondeg) {
      RationalPoint p = point_from_solution(*nondeg);
      if (!on_curve(p)) throw std::logic_error("point verification failed");
      auto rep = representative_check(p);
      std::cout << ", point x = " << p.x << ", y = " << p.y
                << ", representative "
                << (rep.unique && rep.v3_ok ? "ok" : "FAILED");
    }
    std::cout << "\n";
  }
  RankEvidence ev = rank_lower_bound(f, bound);
  std::cout << "quadruples with solutions: " << ev.quadruples_with_solution
            << " (non-degenerate: "
            << ev.quadruples_with_nondegenerate_solution << ")\n";
  std::cout << "r_all = "
            << (ev.r_all ? std::to_string(*ev.r_all) : std::string("n/a"));
  std::cout << ", r_nondeg = "
            << (ev.r_nondeg ? std::to_string(*ev.r_nondeg)
                            : std::string("n/a"));
  std::cout << ", s = "
            << (local.s ? std::to_string(*local.s) : std::string("n/a"))
            << "\n";
  if (!ev.within_local_bound) {
    std::cout << "FINDING: global solutions outside the local bound\n";
    return kExitFinding;
  }
  if (ev.r_all && local.s && *ev.r_all > *local.s) {
    std::cout << "FINDING: r_all exceeds s\n";
    return kExitFinding;
  }
  return kExitOk;
}

// --- trend -------------------------------------------------------------------

int cmd_trend(std::vector<uint64_t> checkpoints, int h_int, int jobs) {
  FamilyClass h = family_class_from_int(h_int);
  std::sort(checkpoints.begin(), checkpoints.end());
  SpfTable table = build_spf_table(std::max<uint64_t>(checkpoints.back(), 2));
  ScanOptions opts;
  opts.jobs = jobs;
  std::vector<ScanSummary> sums;
  uint64_t lo = 0;
  for (uint64_t x : checkpoints) {
    auto part = scan_range(lo, x, h, table, opts);
    sums.push_back(sums.empty() ? part.summary
                                : merge(sums.back(), part.summary));
    lo = x;
  }
  auto rows = trend_report(sums);
  std::cout << "X,members,average,|average - 9|\n";
  for (const auto& row : rows) {
    std::cout << row.x_max << "," << row.member_count << ","
              << row.average_decimal << "," << row.gap_decimal << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relaxed 2-Selmer counts for the curves y^2 = x(x+3n)(x-n)"};
  app.require_subcommand(1);

  uint64_t n = 0, x_max = 0, bound = 10000;
  int h_int = 0, jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  int depth = kDefaultPadicDepth, sample_modulus = 64;
  int budget = kDefaultGSumOmegaBudget;
  std::string emit = "csv", out_path, resume_path, mode = "all";
  std::vector<uint64_t> checkpoints{10000, 100000, 1000000};

  auto* selmer_cmd = app.add_subcommand("selmer", "relaxed count for one n");
  selmer_cmd->add_option("n", n, "curve parameter")->required();
  selmer_cmd->add_option("--class", h_int, "family class (5 or 13)")
      ->required()
      ->check(CLI::IsMember({5, 13}));

  auto* scan_cmd = app.add_subcommand("scan", "scan the family up to X");
  scan_cmd->add_option("--max", x_max, "scan bound X")->required();
  scan_cmd->add_option("--class", h_int, "family class (5 or 13)")
      ->required()
      ->check(CLI::IsMember({5, 13}));
  scan_cmd->add_option("--jobs", jobs, "worker threads");
  scan_cmd->add_option("--emit", emit, "record format")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  scan_cmd->add_option("--out", out_path, "record file (default: stdout)");
  scan_cmd->add_option("--resume", resume_path,
                       "resume cache path (default: "
                       "$SELMERSCAN_CACHE_DIR/scan-cache-h<class>.jsonl)");
  scan_cmd->add_option("--sample-rate", sample_modulus,
                       "equivalence sampling modulus for omega >= 4");

  auto* verify_cmd = app.add_subcommand("verify", "run an invariant suite");
  verify_cmd->add_option("--max", x_max, "member bound")->required();
  verify_cmd->add_option("--class", h_int, "restrict to one class")
      ->check(CLI::IsMember({5, 13}));
  verify_cmd->add_option("--mode", mode, "suite to run")
      ->check(CLI::IsMember({"equivalence", "oracle", "q2q3", "points", "all"}));
  verify_cmd->add_option("--jobs", jobs, "worker threads");
  verify_cmd->add_option("--depth", depth, "p-adic lifting depth");
  verify_cmd->add_option("--bound", bound, "global search coordinate bound");

  auto* points_cmd =
      app.add_subcommand("points", "solution search and point pipeline");
  points_cmd->add_option("n", n, "curve parameter")->required();
  points_cmd->add_option("--class", h_int, "family class (5 or 13)")
      ->required()
      ->check(CLI::IsMember({5, 13}));
  points_cmd->add_option("--bound", bound, "coordinate bound");

  auto* trend_cmd =
      app.add_subcommand("trend", "average-count table at checkpoints");
  trend_cmd->add_option("--class", h_int, "family class (5 or 13)")
      ->required()
      ->check(CLI::IsMember({5, 13}));
  trend_cmd->add_option("--at", checkpoints, "checkpoints (ascending)");
  trend_cmd->add_option("--jobs", jobs, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (selmer_cmd->parsed()) return cmd_selmer(n, h_int);
    if (scan_cmd->parsed())
      return cmd_scan(x_max, h_int, jobs, emit, out_path, resume_path,
                      sample_modulus);
    if (verify_cmd->parsed()) {
      std::vector<int> classes =
          h_int == 0 ? std::vector<int>{5, 13} : std::vector<int>{h_int};
      return cmd_verify(x_max, classes, mode, jobs, depth, bound, budget);
    }
    if (points_cmd->parsed()) return cmd_points(n, h_int, bound);
    if (trend_cmd->parsed()) return cmd_trend(checkpoints, h_int, jobs);
  } catch (const std::invalid_argument& e) {
    std::cout << "rejected: " << e.what() << "\n";
    return kExitRejected;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfra;
  }
  return kExitOk;
}
