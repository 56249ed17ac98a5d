#include "selmer/descent.hpp"

#include <stdexcept>

#include <map>
#include <numeric>

#include "doctest.h"
#include "selmer/family.hpp"

using namespace selmer;

namespace {

SpfTable& table() {
  static SpfTable t = build_spf_table(25000);
  return t;
}

Quadruple quad_from_parts(const Factorization& f,
                          const std::array<uint64_t, 4>& parts) {
  uint64_t total = quadruple_count(f);
  for (uint64_t code = 0; code < total; ++code) {
    Quadruple q = make_quadruple(f, code);
    if (q.parts == parts) return q;
  }
  FAIL("no quadruple with requested parts");
  return {};
}

// Recount with the prime <-> digit association reversed; the result must
// not depend on enumeration order.
uint64_t relaxed_count_reversed(const Factorization& f) {
  uint64_t total = quadruple_count(f);
  uint64_t count = 0;
  for (uint64_t code = 0; code < total; ++code) {
    uint64_t reversed = 0;
    for (int k = 0; k < f.omega; ++k) {
      reversed |= ((code >> (2 * k)) & 3) << (2 * (f.omega - 1 - k));
    }
    Quadruple q = make_quadruple(f, reversed);
    if (is_everywhere_locally_solvable(q).first) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("odd prime conditions examples") {
  auto f5 = *factorize(5, table());
  CHECK(odd_prime_conditions(quad_from_parts(f5, {1, 1, 1, 5})) == 1);
  CHECK(odd_prime_conditions(quad_from_parts(f5, {5, 1, 1, 1})) == 0);

  auto f85 = *factorize(85, table());
  CHECK(odd_prime_conditions(quad_from_parts(f85, {5, 17, 1, 1})) == 3);
  // (n1 n4 / 5) = (17 / 5) = (2 / 5) = -1: the prime 5 (bit 0) fails.
  uint32_t ok = odd_prime_conditions(quad_from_parts(f85, {1, 1, 5, 17}));
  CHECK((ok & 1) == 0);
}

TEST_CASE("q2 condition sets examples") {
  auto f13 = *factorize(13, table());
  uint8_t sets = q2_condition_sets(quad_from_parts(f13, {1, 13, 1, 1}));
  CHECK((sets & kQ2iv) != 0);
  CHECK((sets & kQ2ii) == 0);

  auto f85 = *factorize(85, table());
  sets = q2_condition_sets(quad_from_parts(f85, {1, 1, 85, 1}));
  CHECK((sets & kQ2iv) != 0);
  CHECK((sets & kQ2ii) == 0);

  // All parts = 1 (mod 8): every congruence among equal residues holds.
  auto f41 = *factorize(41, table());  // 41 = 1 (mod 8)
  sets = q2_condition_sets(quad_from_parts(f41, {41, 1, 1, 1}));
  CHECK((sets & kQ2ii) != 0);
  CHECK((sets & kQ2iv) != 0);
}

TEST_CASE("q2 claim: ii or iv holds for every quadruple of every member") {
  for (FamilyClass h : {FamilyClass::kH5, FamilyClass::kH13}) {
    for (const auto& f : stream_members(2000, h, table())) {
      uint64_t total = quadruple_count(f);
      for (uint64_t code = 0; code < total; ++code) {
        uint8_t sets = q2_condition_sets(make_quadruple(f, code));
        REQUIRE((sets & (kQ2ii | kQ2iv)) != 0);
      }
    }
  }
}

TEST_CASE("q3 condition sets examples") {
  auto f5 = *factorize(5, table());
  uint8_t sets = q3_condition_sets(quad_from_parts(f5, {1, 1, 1, 5}));
  CHECK((sets & kQ3i) != 0);

  auto f85 = *factorize(85, table());
  sets = q3_condition_sets(quad_from_parts(f85, {5, 17, 1, 1}));
  CHECK(sets == kQ3iii);

  auto f13 = *factorize(13, table());
  sets = q3_condition_sets(quad_from_parts(f13, {13, 1, 1, 1}));
  CHECK((sets & kQ3i) != 0);
}

TEST_CASE("everywhere-local solvability examples") {
  auto f5 = *factorize(5, table());
  CHECK(is_everywhere_locally_solvable(quad_from_parts(f5, {1, 1, 1, 5})).first);
  CHECK(!is_everywhere_locally_solvable(quad_from_parts(f5, {5, 1, 1, 1})).first);

  auto f85 = *factorize(85, table());
  auto [pass, verdict] =
      is_everywhere_locally_solvable(quad_from_parts(f85, {17, 5, 1, 1}));
  CHECK(pass);
  CHECK(verdict.all_odd_ok());
  CHECK(verdict.q2_sets != 0);
  CHECK((verdict.q3_sets & kQ3iii) != 0);
  CHECK(verdict.real_ok);
}

TEST_CASE("relaxed count anchors") {
  auto r5 = relaxed_count(*factorize(5, table()));
  CHECK(r5.count == 2);
  CHECK(r5.s == 1);
  CHECK(r5.passing == std::vector<uint64_t>{2, 3});
  CHECK(r5.anomaly == 0);

  auto r13 = relaxed_count(*factorize(13, table()));
  CHECK(r13.count == 4);
  CHECK(r13.s == 2);
  CHECK(r13.passing == std::vector<uint64_t>{0, 1, 2, 3});

  auto r85 = relaxed_count(*factorize(85, table()));
  CHECK(r85.count == 4);
  CHECK(r85.s == 2);
  CHECK(r85.passing == std::vector<uint64_t>{1, 4, 10, 15});
  // Codes 1, 4, 10, 15 are (17,5,1,1), (5,17,1,1), (1,1,85,1), (1,1,1,85).
  CHECK(make_quadruple(*factorize(85, table()), 4).parts ==
        std::array<uint64_t, 4>{5, 17, 1, 1});

  auto r221 = relaxed_count(*factorize(221, table()));
  CHECK(r221.count == 8);
  CHECK(r221.s == 3);
}

TEST_CASE("witness quadruple (1,1,1,n) always passes") {
  for (FamilyClass h : {FamilyClass::kH5, FamilyClass::kH13}) {
    for (const auto& f : stream_members(3000, h, table())) {
      uint64_t witness = quadruple_count(f) - 1;  // all digits 3
      Quadruple q = make_quadruple(f, witness);
      CHECK(q.parts == std::array<uint64_t, 4>{1, 1, 1, f.value});
      REQUIRE(is_everywhere_locally_solvable(q).first);
    }
  }
}

TEST_CASE("relaxed count rejects non-members") {
  CHECK_THROWS_AS((void)relaxed_count(*factorize(7, table())),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)count_via_g(*factorize(7, table())),
                  std::invalid_argument);
}

TEST_CASE("g_sign slot examples for n = 5") {
  auto f5 = *factorize(5, table());
  // digit 0 -> slot (1,0); digit 2 -> slot (1,3); digit 5 -> slot (2,1)
  CHECK(g_sign(make_sixteen(f5, 0)) == 1);
  CHECK(g_sign(make_sixteen(f5, 2)) == -1);
  CHECK(g_sign(make_sixteen(f5, 5)) == 1);

  SixteenAssignment a = make_sixteen(f5, 0);
  CHECK(a.slot_value(1, 0) == 5);
  a = make_sixteen(f5, 2);
  CHECK(a.slot_value(1, 3) == 5);
  CHECK(a.beta() == 5);
  CHECK(a.alpha() == 1);
  a = make_sixteen(f5, 5);
  CHECK(a.slot_value(2, 1) == 5);
  CHECK(a.alpha() == 5);
  CHECK(a.beta() == 1);
}

TEST_CASE("count_via_g equals relaxed count on anchors") {
  for (uint64_t n : {5, 13, 85, 37, 61, 221}) {
    auto f = *factorize(n, table());
    auto g = count_via_g(f);
    REQUIRE(g.status == GSumOutcome::Status::kOk);
    CHECK(g.count == relaxed_count(f).count);
  }
}

TEST_CASE("exact equivalence over both classes up to 2000") {
  for (FamilyClass h : {FamilyClass::kH5, FamilyClass::kH13}) {
    for (const auto& f : stream_members(2000, h, table())) {
      auto g = count_via_g(f);
      REQUIRE(g.status == GSumOutcome::Status::kOk);
      REQUIRE(g.count == relaxed_count(f).count);
    }
  }
}

TEST_CASE("g-sum respects the omega budget") {
  auto f = *factorize(1885, table());  // 5 * 13 * 29, 1885 = 13 (mod 24)
  auto g = count_via_g(f, 2);
  CHECK(g.status == GSumOutcome::Status::kOverBudget);
  g = count_via_g(f, 3);
  CHECK(g.status == GSumOutcome::Status::kOk);
  CHECK(g.count == relaxed_count(f).count);
}

TEST_CASE("(-1/alpha) = 1 on every assignment of sampled members") {
  for (FamilyClass h : {FamilyClass::kH5, FamilyClass::kH13}) {
    for (const auto& f : stream_members(1200, h, table())) {
      uint64_t total = sixteen_count(f);
      uint64_t step = f.omega <= 2 ? 1 : 97;
      for (uint64_t code = 0; code < total; code += step) {
        REQUIRE(jacobi(-1, make_sixteen(f, code).alpha()) == 1);
      }
    }
  }
}

TEST_CASE("relaxed count is independent of enumeration order") {
  for (FamilyClass h : {FamilyClass::kH5, FamilyClass::kH13}) {
    for (const auto& f : stream_members(2000, h, table())) {
      REQUIRE(relaxed_count(f).count == relaxed_count_reversed(f));
    }
  }
}

TEST_CASE("q2 and q3 anomalies never fire over members up to 5000") {
  for (FamilyClass h : {FamilyClass::kH5, FamilyClass::kH13}) {
    for (const auto& f : stream_members(5000, h, table())) {
      auto r = relaxed_count(f);
      REQUIRE(r.anomaly == 0);
      REQUIRE(r.count >= 1);
      REQUIRE(r.s.has_value());
    }
  }
}
