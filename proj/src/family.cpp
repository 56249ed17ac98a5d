#include "selmer/family.hpp"

#include <numeric>
#include <stdexcept>

namespace selmer {

FamilyClass family_class_from_int(int h) {
  if (h == 5) return FamilyClass::kH5;
  if (h == 13) return FamilyClass::kH13;
  throw std::invalid_argument("family class must be 5 or 13, got " +
                              std::to_string(h));
}

bool is_member(const Factorization& f, FamilyClass h) {
  if (f.mod24 != static_cast<uint32_t>(class_value(h))) return false;
  for (uint32_t p : f.prime_span()) {
    if (p % 4 != 1) return false;
  }
  return true;
}

MembershipCheck check_membership(uint64_t n, const SpfTable& table,
                                 FamilyClass h) {
  MembershipCheck c;
  if (n < 2) {
    c.reason = "n = " + std::to_string(n) + " is below 2";
    return c;
  }
  uint64_t h24 = static_cast<uint64_t>(class_value(h));
  if (n % 24 != h24) {
    c.reason = "n = " + std::to_string(n % 24) + " (mod 24), expected " +
               std::to_string(h24);
    return c;
  }
  uint64_t repeated = 0;
  auto f = factorize(n, table, &repeated);
  if (!f) {
    c.reason = "repeated prime " + std::to_string(repeated) +
               " (n is not square-free)";
    return c;
  }
  for (uint32_t p : f->prime_span()) {
    if (p % 4 != 1) {
      c.reason = "prime " + std::to_string(p) + " = " + std::to_string(p % 4) +
                 " (mod 4)";
      return c;
    }
  }
  c.ok = true;
  return c;
}

std::vector<Factorization> stream_members_range(uint64_t lo, uint64_t hi,
                                                FamilyClass h,
                                                const SpfTable& table) {
  if (hi > table.limit())
    throw std::out_of_range("stream_members_range: hi exceeds sieve limit");
  std::vector<Factorization> out;
  uint64_t h24 = static_cast<uint64_t>(class_value(h));
  // First candidate = h (mod 24) strictly above lo.
  uint64_t n = lo < h24 ? h24 : lo + 1 + (h24 + 24 - (lo + 1) % 24) % 24;
  for (; n <= hi; n += 24) {
    // Inline membership walk: reject on first repeated or = 3 (mod 4) prime.
    uint64_t m = n;
    bool ok = true;
    while (m > 1) {
      uint32_t p = table.spf(m);
      if (p % 4 != 1) {
        ok = false;
        break;
      }
      m /= p;
      if (m % p == 0) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    auto f = factorize(n, table);
    // n = 5 (mod 8) and gcd(n, 6) = 1 are forced by the residue conditions.
    if (f->mod8 != 5 || std::gcd(f->value, uint64_t{6}) != 1)
      throw std::logic_error("family invariant violated at n = " +
                             std::to_string(n));
    out.push_back(*f);
  }
  return out;
}

std::vector<Factorization> stream_members(uint64_t x_max, FamilyClass h,
                                          const SpfTable& table) {
  return stream_members_range(0, x_max, h, table);
}

}  // namespace selmer
