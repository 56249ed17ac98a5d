#include "selmer/descent.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace selmer {

namespace {

// (c * a * b / p) with a, b reduced mod p first; c is a small signed
// constant. The arguments stay below p^2 < 2^63 for any sieve-scale p.
int symbol(int64_t c, uint64_t a, uint64_t b, uint64_t p) {
  uint64_t r = ((a % p) * (b % p)) % p;
  return jacobi(c * static_cast<int64_t>(r), p);
}

void require_family_member(const Factorization& f, const char* where) {
  bool ok = f.mod24 == 5 || f.mod24 == 13;
  for (uint32_t p : f.prime_span()) ok = ok && p % 4 == 1;
  if (!ok)
    throw std::invalid_argument(std::string(where) + ": n = " +
                                std::to_string(f.value) +
                                " is not a family member");
}

}  // namespace

uint32_t odd_prime_conditions(const Quadruple& q) {
  const Factorization& f = *q.base;
  const auto& n = q.parts;
  uint32_t ok = 0;
  for (int k = 0; k < f.omega; ++k) {
    uint64_t p = f.primes[k];
    bool pass = false;
    switch (q.part_of(k)) {
      case 0:  // p | n1
        pass = symbol(3, n[1], n[3], p) == 1 && symbol(-1, n[2], n[3], p) == 1;
        break;
      case 1:  // p | n2
        pass = symbol(-3, n[0], n[3], p) == 1 && symbol(-1, n[2], n[3], p) == 1;
        break;
      case 2:  // p | n3
        pass = symbol(1, n[0], n[3], p) == 1 && symbol(1, n[1], n[3], p) == 1;
        break;
      default:  // p | n4
        pass = symbol(1, n[0], n[1], p) == 1 && symbol(1, n[0], n[2], p) == 1;
        break;
    }
    if (pass) ok |= uint32_t{1} << k;
  }
  return ok;
}

uint8_t q2_condition_sets(const Quadruple& q) {
  uint32_t n1 = q.parts[0] % 8, n2 = q.parts[1] % 8, n3 = q.parts[2] % 8,
           n4 = q.parts[3] % 8;
  uint8_t sets = 0;
  if (n2 % 4 == (3 * n4) % 4 && n3 % 4 == (4 - n4 % 4) % 4 &&
      (n2 + 3 * n3) % 8 == 0)
    sets |= kQ2i;
  if (n1 % 4 == n2 % 4 && n2 % 4 == n3 % 4 && n2 == n3) sets |= kQ2ii;
  if (n1 % 4 == (3 * n3) % 4 && n4 % 4 == (4 - n3 % 4) % 4 &&
      (n1 + 3 * n4) % 8 == 0)
    sets |= kQ2iii;
  if (n2 % 4 == n1 % 4 && n1 % 4 == n4 % 4 && n1 == n4) sets |= kQ2iv;
  return sets;
}

uint8_t q3_condition_sets(const Quadruple& q) {
  uint32_t n1 = q.parts[0] % 3, n2 = q.parts[1] % 3, n3 = q.parts[2] % 3,
           n4 = q.parts[3] % 3;
  uint8_t sets = 0;
  if (n1 == n2 && n2 == n3) sets |= kQ3i;
  if (n1 == n2 && n2 == n4) sets |= kQ3ii;
  if (n1 == n2 && (n1 + 3 - n4) % 3 == n3) sets |= kQ3iii;
  return sets;
}

bool real_solvable(const Quadruple& q) {
  // n1, n4 > 0 by construction; the first equation then forces n2 > 0 and
  // n = n1 n2 n3 n4 > 0 forces n3 > 0.
  return q.parts[0] > 0 && q.parts[1] > 0 && q.parts[2] > 0 && q.parts[3] > 0;
}

std::pair<bool, LocalVerdict> is_everywhere_locally_solvable(
    const Quadruple& q) {
  LocalVerdict v;
  v.omega = q.base->omega;
  v.odd_ok = odd_prime_conditions(q);
  v.q2_sets = q2_condition_sets(q);
  v.q3_sets = q3_condition_sets(q);
  v.real_ok = real_solvable(q);
  return {v.everywhere(), v};
}

DescentResult relaxed_count(const Factorization& f) {
  require_family_member(f, "relaxed_count");
  DescentResult r;
  r.n = f.value;
  uint64_t total = quadruple_count(f);
  for (uint64_t code = 0; code < total; ++code) {
    Quadruple q = make_quadruple(f, code);
    auto [pass, v] = is_everywhere_locally_solvable(q);
    if ((v.q2_sets & (kQ2ii | kQ2iv)) == 0) r.anomaly |= kAnomalyQ2Claim;
    if (v.all_odd_ok() && v.q2_sets != 0 && v.q3_sets == 0)
      r.anomaly |= kAnomalyQ3Implication;
    if (pass) {
      ++r.count;
      r.passing.push_back(code);
    }
  }
  if (std::has_single_bit(r.count)) {
    r.s = std::countr_zero(r.count);
  } else {
    r.anomaly |= kAnomalyCountNotPowerOfTwo;
  }
  return r;
}

int g_sign(const SixteenAssignment& a) {
  int sign = jacobi(-1, a.alpha()) * jacobi(3, a.beta());
  for (int i = 1; i <= 4; ++i) {
    for (int j = 1; j <= 4; ++j) {
      if (j == i) continue;
      uint64_t m = a.slot_value(i, j);
      if (m == 1) continue;
      // Argument = product of the two parts complementary to {i, j}.
      uint64_t arg = 1;
      for (int k = 1; k <= 4; ++k) {
        if (k != i && k != j) arg = (arg % m) * (a.parts[k - 1] % m) % m;
      }
      sign *= jacobi(static_cast<int64_t>(arg), m);
    }
  }
  return sign;
}

GSumOutcome count_via_g(const Factorization& f, int omega_budget) {
  require_family_member(f, "count_via_g");
  GSumOutcome out;
  if (f.omega > omega_budget) {
    out.status = GSumOutcome::Status::kOverBudget;
    return out;
  }
  __int128 total = 0;
  uint64_t terms = sixteen_count(f);
  for (uint64_t code = 0; code < terms; ++code) {
    total += g_sign(make_sixteen(f, code));
  }
  out.sign_sum = total;
  __int128 denom = static_cast<__int128>(quadruple_count(f));
  if (total <= 0 || total % denom != 0) {
    out.status = GSumOutcome::Status::kNotDivisible;
    return out;
  }
  out.count = static_cast<uint64_t>(total / denom);
  return out;
}

}  // namespace selmer
