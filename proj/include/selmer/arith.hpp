#pragma once

// Exact integer arithmetic primitives: smallest-prime-factor sieving,
// square-free factorization, the Jacobi symbol, and the base-4 / base-16
// enumeration of coprime factorizations that the descent layer consumes.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace selmer {

// A square-free 64-bit integer has at most 15 distinct prime factors.
inline constexpr int kMaxOmega = 15;

// Immutable smallest-prime-factor table, built once and shared read-only.
class SpfTable {
 public:
  explicit SpfTable(uint64_t limit);

  uint64_t limit() const { return spf_.size() - 1; }

  // Smallest prime factor of m, 2 <= m <= limit().
  uint32_t spf(uint64_t m) const;

 private:
  std::vector<uint32_t> spf_;
};

inline SpfTable build_spf_table(uint64_t limit) { return SpfTable(limit); }

struct Factorization {
  uint64_t value = 0;
  std::array<uint32_t, kMaxOmega> primes{};  // strictly ascending
  int omega = 0;
  uint32_t mod24 = 0;
  uint32_t mod8 = 0;
  uint32_t mod4 = 0;
  uint32_t mod3 = 0;

  std::span<const uint32_t> prime_span() const {
    return {primes.data(), static_cast<size_t>(omega)};
  }
};

// Factorization of a square-free n via the sieve; nullopt when n has a
// repeated prime (if repeated_prime is non-null it receives that prime).
// Throws std::out_of_range when n < 2 or n exceeds the table limit.
std::optional<Factorization> factorize(uint64_t n, const SpfTable& table,
                                       uint64_t* repeated_prime = nullptr);

// Jacobi symbol (a/m) for odd m >= 1, any a (negatives reduced mod m).
// Throws std::invalid_argument when m is even or zero.
int jacobi(int64_t a, uint64_t m);

// --- coprime factorizations -------------------------------------------
//
// A quadruple assigns each prime of n to one of the four parts; the code is
// the assignment read as a base-4 integer over ascending primes (digit 0 =
// part 1). A sixteen-assignment refines this to the 12+4 slots (i,j),
// i in 1..4, j in 0..4, j != i, encoded base-16: digit d maps to
// i = d/4 + 1 and j = kSlotColumns[i-1][d%4].

struct Quadruple {
  const Factorization* base = nullptr;
  uint64_t code = 0;
  std::array<uint64_t, 4> parts{1, 1, 1, 1};  // n1, n2, n3, n4

  // 0-based part index of the k-th (ascending) prime.
  int part_of(int k) const { return static_cast<int>((code >> (2 * k)) & 3); }
};

inline constexpr std::array<std::array<int, 4>, 4> kSlotColumns{{
    {0, 2, 3, 4},  // i = 1
    {0, 1, 3, 4},  // i = 2
    {0, 1, 2, 4},  // i = 3
    {0, 1, 2, 3},  // i = 4
}};

struct SixteenAssignment {
  const Factorization* base = nullptr;
  uint64_t code = 0;
  // slot[i-1][j] = product of primes assigned to slot (i,j); unused (j == i)
  // entries stay 1 so products over rows need no special cases.
  std::array<std::array<uint64_t, 5>, 4> slot{};
  std::array<uint64_t, 4> parts{1, 1, 1, 1};  // n_i = prod_j slot(i,j)

  uint64_t slot_value(int i, int j) const { return slot[i - 1][j]; }

  // alpha = n12 n14 n23 n21, beta = n13 n14 n23 n24
  uint64_t alpha() const {
    return slot[0][2] * slot[0][4] * slot[1][3] * slot[1][1];
  }
  uint64_t beta() const {
    return slot[0][3] * slot[0][4] * slot[1][3] * slot[1][4];
  }

  // Coarsen slots (i,j) to part i; recovers the base-4 code digitwise.
  Quadruple coarsen() const;
};

uint64_t quadruple_count(const Factorization& f);  // 4^omega
uint64_t sixteen_count(const Factorization& f);    // 16^omega

Quadruple make_quadruple(const Factorization& f, uint64_t code);
SixteenAssignment make_sixteen(const Factorization& f, uint64_t code);

// Materialized enumerations in ascending code order (small omega only;
// scan paths loop over codes with make_* instead).
std::vector<Quadruple> enumerate_quadruples(const Factorization& f);
std::vector<SixteenAssignment> enumerate_sixteen(const Factorization& f);

}  // namespace selmer
