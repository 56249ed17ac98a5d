#pragma once

// Membership and streaming for the population S(X,h): square-free n <= X
// with n = h (mod 24), h in {5, 13}, every prime divisor = 1 (mod 4).

#include <string>
#include <vector>

#include "selmer/arith.hpp"

namespace selmer {

enum class FamilyClass : int { kH5 = 5, kH13 = 13 };

inline int class_value(FamilyClass h) { return static_cast<int>(h); }

// Throws std::invalid_argument unless h is 5 or 13.
FamilyClass family_class_from_int(int h);

bool is_member(const Factorization& f, FamilyClass h);

struct MembershipCheck {
  bool ok = false;
  std::string reason;  // first failing clause, empty when ok
};

MembershipCheck check_membership(uint64_t n, const SpfTable& table,
                                 FamilyClass h);

// Members of S(x_max, h) in ascending order. Throws std::out_of_range when
// x_max exceeds the table limit.
std::vector<Factorization> stream_members(uint64_t x_max, FamilyClass h,
                                          const SpfTable& table);

// Members in the half-open range (lo, hi]; concatenating disjoint subranges
// reproduces the full stream.
std::vector<Factorization> stream_members_range(uint64_t lo, uint64_t hi,
                                                FamilyClass h,
                                                const SpfTable& table);

}  // namespace selmer
