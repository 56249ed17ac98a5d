#include "selmer/arith.hpp"

#include <bit>
#include <stdexcept>
#include <string>
#include <utility>

namespace selmer {

SpfTable::SpfTable(uint64_t limit) {
  if (limit < 2) throw std::invalid_argument("SpfTable: limit must be >= 2");
  spf_.assign(limit + 1, 0);
  for (uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    for (uint64_t j = i; j <= limit; j += i) {
      if (spf_[j] == 0) spf_[j] = static_cast<uint32_t>(i);
    }
  }
}

uint32_t SpfTable::spf(uint64_t m) const {
  if (m < 2 || m > limit())
    throw std::out_of_range("SpfTable::spf: query " + std::to_string(m) +
                            " outside [2, " + std::to_string(limit()) + "]");
  return spf_[m];
}

std::optional<Factorization> factorize(uint64_t n, const SpfTable& table,
                                       uint64_t* repeated_prime) {
  if (n < 2 || n > table.limit())
    throw std::out_of_range("factorize: n = " + std::to_string(n) +
                            " outside [2, " + std::to_string(table.limit()) +
                            "]");
  Factorization f;
  f.value = n;
  uint64_t m = n;
  while (m > 1) {
    uint32_t p = table.spf(m);
    m /= p;
    if (m % p == 0) {
      if (repeated_prime) *repeated_prime = p;
      return std::nullopt;
    }
    f.primes[f.omega++] = p;  // spf walk yields ascending primes
  }
  f.mod24 = static_cast<uint32_t>(n % 24);
  f.mod8 = static_cast<uint32_t>(n % 8);
  f.mod4 = static_cast<uint32_t>(n % 4);
  f.mod3 = static_cast<uint32_t>(n % 3);
  return f;
}

int jacobi(int64_t a, uint64_t m) {
  if (m == 0 || (m & 1) == 0)
    throw std::invalid_argument("jacobi: modulus must be odd and positive");
  // Reduce a into [0, m); the symbol depends on a only mod m, and this
  // folds (-1/m) for negative a.
  int64_t r = a % static_cast<int64_t>(m);
  uint64_t x = static_cast<uint64_t>(r < 0 ? r + static_cast<int64_t>(m) : r);
  int sign = 1;
  while (x != 0) {
    int tz = std::countr_zero(x);
    x >>= tz;
    if (tz & 1) {
      uint64_t m8 = m & 7;
      if (m8 == 3 || m8 == 5) sign = -sign;
    }
    if ((x & 3) == 3 && (m & 3) == 3) sign = -sign;
    std::swap(x, m);
    x %= m;
  }
  return m == 1 ? sign : 0;
}

uint64_t quadruple_count(const Factorization& f) {
  return uint64_t{1} << (2 * f.omega);
}

uint64_t sixteen_count(const Factorization& f) {
  return uint64_t{1} << (4 * f.omega);
}

Quadruple make_quadruple(const Factorization& f, uint64_t code) {
  Quadruple q;
  q.base = &f;
  q.code = code;
  for (int k = 0; k < f.omega; ++k) {
    q.parts[(code >> (2 * k)) & 3] *= f.primes[k];
  }
  return q;
}

SixteenAssignment make_sixteen(const Factorization& f, uint64_t code) {
  SixteenAssignment a;
  a.base = &f;
  a.code = code;
  for (auto& row : a.slot) row.fill(1);
  for (int k = 0; k < f.omega; ++k) {
    int d = static_cast<int>((code >> (4 * k)) & 15);
    int i = d / 4;
    int j = kSlotColumns[i][d % 4];
    a.slot[i][j] *= f.primes[k];
    a.parts[i] *= f.primes[k];
  }
  return a;
}

Quadruple SixteenAssignment::coarsen() const {
  // Slot digit d refines part d/4; drop the column bits.
  uint64_t qcode = 0;
  for (int k = 0; k < base->omega; ++k) {
    uint64_t d = (code >> (4 * k)) & 15;
    qcode |= (d >> 2) << (2 * k);
  }
  return make_quadruple(*base, qcode);
}

std::vector<Quadruple> enumerate_quadruples(const Factorization& f) {
  std::vector<Quadruple> out;
  uint64_t total = quadruple_count(f);
  out.reserve(total);
  for (uint64_t code = 0; code < total; ++code)
    out.push_back(make_quadruple(f, code));
  return out;
}

std::vector<SixteenAssignment> enumerate_sixteen(const Factorization& f) {
  std::vector<SixteenAssignment> out;
  uint64_t total = sixteen_count(f);
  out.reserve(total);
  for (uint64_t code = 0; code < total; ++code)
    out.push_back(make_sixteen(f, code));
  return out;
}

}  // namespace selmer
