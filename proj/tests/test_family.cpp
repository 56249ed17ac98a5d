#include "selmer/family.hpp"

#include <stdexcept>

#include <numeric>

#include "doctest.h"

using namespace selmer;

namespace {

// Membership from scratch, independent of the cached residues.
bool brute_member(uint64_t n, int h) {
  if (n % 24 != static_cast<uint64_t>(h)) return false;
  uint64_t m = n;
  for (uint64_t p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    m /= p;
    if (m % p == 0) return false;
    if (p % 4 != 1) return false;
  }
  return m == 1 || m % 4 == 1;
}

}  // namespace

TEST_CASE("membership examples") {
  SpfTable table = build_spf_table(1000);
  CHECK(is_member(*factorize(5, table), FamilyClass::kH5));
  CHECK(!is_member(*factorize(13, table), FamilyClass::kH5));
  CHECK(is_member(*factorize(85, table), FamilyClass::kH13));
  CHECK(is_member(*factorize(221, table), FamilyClass::kH5));
  CHECK(!is_member(*factorize(77, table), FamilyClass::kH5));
}

TEST_CASE("membership check carries the failing clause") {
  SpfTable table = build_spf_table(1000);
  auto ok = check_membership(85, table, FamilyClass::kH13);
  CHECK(ok.ok);
  CHECK(ok.reason.empty());

  auto bad_prime = check_membership(77, table, FamilyClass::kH5);
  CHECK(!bad_prime.ok);
  CHECK(bad_prime.reason == "prime 7 = 3 (mod 4)");

  auto bad_residue = check_membership(13, table, FamilyClass::kH5);
  CHECK(!bad_residue.ok);
  CHECK(bad_residue.reason.find("(mod 24)") != std::string::npos);

  auto repeated = check_membership(325, table, FamilyClass::kH13);  // 5^2 * 13
  CHECK(!repeated.ok);
  CHECK(repeated.reason == "repeated prime 5 (n is not square-free)");
}

TEST_CASE("stream examples") {
  SpfTable table = build_spf_table(1000);
  auto h5 = stream_members(100, FamilyClass::kH5, table);
  REQUIRE(h5.size() == 3);
  CHECK(h5[0].value == 5);
  CHECK(h5[1].value == 29);
  CHECK(h5[2].value == 53);

  CHECK(stream_members(4, FamilyClass::kH5, table).empty());

  auto h13 = stream_members(100, FamilyClass::kH13, table);
  REQUIRE(h13.size() == 4);
  CHECK(h13[0].value == 13);
  CHECK(h13[1].value == 37);
  CHECK(h13[2].value == 61);
  CHECK(h13[3].value == 85);
}

TEST_CASE("stream agrees with brute membership up to 10^4") {
  SpfTable table = build_spf_table(10000);
  for (FamilyClass h : {FamilyClass::kH5, FamilyClass::kH13}) {
    auto members = stream_members(10000, h, table);
    size_t idx = 0;
    uint64_t prev = 0;
    for (uint64_t n = 1; n <= 10000; ++n) {
      bool expected = brute_member(n, class_value(h));
      bool yielded = idx < members.size() && members[idx].value == n;
      CAPTURE(n);
      REQUIRE(yielded == expected);
      if (yielded) {
        CHECK(members[idx].value > prev);
        CHECK(is_member(members[idx], h));
        CHECK(members[idx].mod8 == 5);
        CHECK(std::gcd(members[idx].value, uint64_t{6}) == 1);
        prev = members[idx].value;
        ++idx;
      }
    }
    CHECK(idx == members.size());
  }
}

TEST_CASE("range streams concatenate to the full stream") {
  SpfTable table = build_spf_table(20000);
  for (FamilyClass h : {FamilyClass::kH5, FamilyClass::kH13}) {
    auto full = stream_members(20000, h, table);
    std::vector<Factorization> stitched;
    uint64_t cuts[] = {0, 137, 5000, 12345, 20000};
    for (size_t i = 0; i + 1 < std::size(cuts); ++i) {
      auto part = stream_members_range(cuts[i], cuts[i + 1], h, table);
      stitched.insert(stitched.end(), part.begin(), part.end());
    }
    REQUIRE(stitched.size() == full.size());
    for (size_t i = 0; i < full.size(); ++i)
      CHECK(stitched[i].value == full[i].value);
  }
}

TEST_CASE("family class parsing") {
  CHECK(family_class_from_int(5) == FamilyClass::kH5);
  CHECK(family_class_from_int(13) == FamilyClass::kH13);
  CHECK_THROWS_AS(family_class_from_int(7), std::invalid_argument);
}
