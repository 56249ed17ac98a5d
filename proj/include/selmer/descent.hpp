#pragma once

// Local solvability of the descent system
//
//   n1 X^2 + 3 n4 W^2 = n2 Y^2,   n1 X^2 - n4 W^2 = n3 Z^2
//
// attached to a coprime factorization n = n1 n2 n3 n4, the direct relaxed
// Selmer count over all 4^omega quadruples, and the independent
// character-sum evaluation over all 16^omega slot refinements.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "selmer/arith.hpp"

namespace selmer {

enum AnomalyFlag : uint8_t {
  kAnomalyCountNotPowerOfTwo = 1u << 0,
  kAnomalyQ2Claim = 1u << 1,        // some quadruple had neither ii nor iv
  kAnomalyQ3Implication = 1u << 2,  // odd+Q2 passing quadruple failed Q3
};

enum Q2Set : uint8_t {
  kQ2i = 1u << 0,
  kQ2ii = 1u << 1,
  kQ2iii = 1u << 2,
  kQ2iv = 1u << 3,
};

enum Q3Set : uint8_t {
  kQ3i = 1u << 0,
  kQ3ii = 1u << 1,
  kQ3iii = 1u << 2,
};

struct LocalVerdict {
  int omega = 0;
  uint32_t odd_ok = 0;  // bit k set = conditions hold at the k-th prime
  uint8_t q2_sets = 0;
  uint8_t q3_sets = 0;
  bool real_ok = false;

  uint32_t odd_all_mask() const { return (uint32_t{1} << omega) - 1; }
  bool all_odd_ok() const { return odd_ok == odd_all_mask(); }
  bool everywhere() const {
    return all_odd_ok() && q2_sets != 0 && q3_sets != 0 && real_ok;
  }
};

// Per-prime symbol conditions at the odd primes p | n; bit k of the result
// covers base->primes[k]. For p | n1 the pair is (3 n2 n4 / p) and
// (-n3 n4 / p); for p | n2 it is (-3 n1 n4 / p) and (-n3 n4 / p); for
// p | n3 it is (n1 n4 / p) and (n2 n4 / p); for p | n4 it is (n1 n2 / p)
// and (n1 n3 / p). Both symbols must be +1.
uint32_t odd_prime_conditions(const Quadruple& q);

// Subset of the four 2-adic condition sets that hold (residues mod 4, 8).
uint8_t q2_condition_sets(const Quadruple& q);

// Subset of the three 3-adic condition sets that hold (residues mod 3).
uint8_t q3_condition_sets(const Quadruple& q);

// All constructed parts are positive, so this always holds; kept as a named
// check so the solvability conjunction mirrors the place-by-place argument.
bool real_solvable(const Quadruple& q);

std::pair<bool, LocalVerdict> is_everywhere_locally_solvable(
    const Quadruple& q);

struct DescentResult {
  uint64_t n = 0;
  uint64_t count = 0;            // everywhere-locally-solvable quadruples
  std::optional<int> s;          // log2(count) when count is a power of two
  std::vector<uint64_t> passing; // codes in ascending enumeration order
  uint8_t anomaly = 0;
};

// Direct route: evaluate every quadruple. Requires a family member.
DescentResult relaxed_count(const Factorization& f);

// The +-1 part of the summand g over one slot assignment:
// (-1/alpha)(3/beta) prod (n_kl / n_ij); the 4^{-omega(n)} magnitude is
// factored out by the caller.
int g_sign(const SixteenAssignment& a);

inline constexpr int kDefaultGSumOmegaBudget = 6;  // 16^6 ~ 16.8M terms

struct GSumOutcome {
  enum class Status { kOk, kOverBudget, kNotDivisible };
  Status status = Status::kOk;
  uint64_t count = 0;      // sign_sum / 4^omega, valid when kOk
  __int128 sign_sum = 0;   // raw sum of signs over all 16^omega assignments
};

// Independent route: sum g_sign over all slot assignments and divide by
// 4^omega, asserting exact divisibility. Integer arithmetic throughout.
GSumOutcome count_via_g(const Factorization& f,
                        int omega_budget = kDefaultGSumOmegaBudget);

}  // namespace selmer
