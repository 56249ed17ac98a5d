#include "selmer/oracle.hpp"

#include <stdexcept>

#include "doctest.h"
#include "selmer/descent.hpp"
#include "selmer/family.hpp"

using namespace selmer;

namespace {

SpfTable& table() {
  static SpfTable t = build_spf_table(5000);
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

}  // namespace

TEST_CASE("padic verdict examples") {
  auto f5 = *factorize(5, table());
  auto v = padic_solvable(quad_from_parts(f5, {1, 1, 1, 5}), 5);
  CHECK(v.value == Solvability::kSolvable);

  v = padic_solvable(quad_from_parts(f5, {5, 1, 1, 1}), 5);
  CHECK(v.value == Solvability::kUnsolvable);

  auto f85 = *factorize(85, table());
  v = padic_solvable(quad_from_parts(f85, {5, 17, 1, 1}), 17);
  CHECK(v.value == Solvability::kSolvable);
}

TEST_CASE("padic usage errors") {
  auto f5 = *factorize(5, table());
  Quadruple q = quad_from_parts(f5, {1, 1, 1, 5});
  CHECK_THROWS_AS((void)padic_solvable(q, 7, 6), std::invalid_argument);
  CHECK_THROWS_AS((void)padic_solvable(q, 2, 6), std::invalid_argument);
  CHECK_THROWS_AS((void)padic_solvable(q, 5, 0), std::invalid_argument);
}

TEST_CASE("padic oracle agrees with the symbol criteria up to 400") {
  for (FamilyClass h : {FamilyClass::kH5, FamilyClass::kH13}) {
    for (const auto& f : stream_members(400, h, table())) {
      uint64_t total = quadruple_count(f);
      for (uint64_t code = 0; code < total; ++code) {
        Quadruple q = make_quadruple(f, code);
        uint32_t symbol_ok = odd_prime_conditions(q);
        for (int k = 0; k < f.omega; ++k) {
          auto verdict = padic_solvable(q, f.primes[k]);
          CAPTURE(f.value);
          CAPTURE(code);
          CAPTURE(f.primes[k]);
          REQUIRE(verdict.value != Solvability::kInconclusive);
          REQUIRE((verdict.value == Solvability::kSolvable) ==
                  ((symbol_ok >> k & 1) != 0));
        }
      }
    }
  }
}

TEST_CASE("search_global examples") {
  auto f5 = *factorize(5, table());
  auto sol = search_global(quad_from_parts(f5, {1, 1, 5, 1}), 10);
  REQUIRE(sol.has_value());
  CHECK(sol->x == 1);
  CHECK(sol->w == 1);
  CHECK(sol->y == 2);
  CHECK(sol->z == 0);
  CHECK(sol->degenerate);

  sol = search_global(quad_from_parts(f5, {1, 1, 1, 5}), 10);
  REQUIRE(sol.has_value());
  CHECK(sol->x == 1);
  CHECK(sol->w == 0);
  CHECK(sol->y == 1);
  CHECK(sol->z == 1);
  CHECK(sol->degenerate);

  CHECK(!search_global(quad_from_parts(f5, {5, 1, 1, 1}), 50).has_value());

  auto f13 = *factorize(13, table());
  sol = search_global(quad_from_parts(f13, {13, 1, 1, 1}), 10);
  REQUIRE(sol.has_value());
  CHECK(sol->x == 1);
  CHECK(sol->w == 2);
  CHECK(sol->y == 5);
  CHECK(sol->z == 3);
  CHECK(!sol->degenerate);
}

TEST_CASE("solutions satisfy the system exactly") {
  auto f13 = *factorize(13, table());
  uint64_t total = quadruple_count(f13);
  for (uint64_t code = 0; code < total; ++code) {
    Quadruple q = make_quadruple(f13, code);
    auto sol = search_global(q, 50);
    if (!sol) continue;
    int64_t n1 = static_cast<int64_t>(q.parts[0]);
    int64_t n2 = static_cast<int64_t>(q.parts[1]);
    int64_t n3 = static_cast<int64_t>(q.parts[2]);
    int64_t n4 = static_cast<int64_t>(q.parts[3]);
    CHECK(n1 * sol->x * sol->x + 3 * n4 * sol->w * sol->w ==
          n2 * sol->y * sol->y);
    CHECK(n1 * sol->x * sol->x - n4 * sol->w * sol->w ==
          n3 * sol->z * sol->z);
  }
}

TEST_CASE("point reconstruction for n = 13") {
  auto f13 = *factorize(13, table());
  Quadruple q = quad_from_parts(f13, {13, 1, 1, 1});
  auto sol = search_global(q, 10, /*require_nondegenerate=*/true);
  REQUIRE(sol.has_value());
  RationalPoint p = point_from_solution(*sol);
  CHECK(p.x == mpq_class(169, 4));
  CHECK(p.y == mpq_class(2535, 8));
  CHECK(on_curve(p));
  CHECK(theta_class_consistent(p, q));

  // W = 1 solutions give integral x.
  Quadruple q2 = quad_from_parts(f13, {1, 13, 1, 1});
  auto sol2 = search_global(q2, 100, true);
  REQUIRE(sol2.has_value());
  CHECK(sol2->w == 3);
  RationalPoint p2 = point_from_solution(*sol2);
  CHECK(on_curve(p2));
  CHECK(theta_class_consistent(p2, q2));
}

TEST_CASE("degenerate solutions are rejected by point reconstruction") {
  auto f5 = *factorize(5, table());
  auto sol = search_global(quad_from_parts(f5, {1, 1, 1, 5}), 10);
  REQUIRE(sol.has_value());
  CHECK_THROWS_AS((void)point_from_solution(*sol), std::invalid_argument);
}

TEST_CASE("coset translates match the closed x-forms") {
  auto f13 = *factorize(13, table());
  Quadruple q = quad_from_parts(f13, {13, 1, 1, 1});
  RationalPoint p = point_from_solution(*search_global(q, 10, true));
  auto translates = coset_translates(p);

  mpq_class n(13);
  CHECK(translates[0].x == mpq_class(-3 * 13 * 13) / p.x);
  CHECK(translates[1].x == n * (p.x + 3 * n) / (p.x - n));
  CHECK(translates[2].x == -3 * n * (p.x - n) / (p.x + 3 * n));
  for (const auto& t : translates) CHECK(on_curve(t));

  // Translating by (0,0) twice returns to the start.
  auto twice = coset_translates(translates[0]);
  CHECK(twice[0].x == p.x);
  CHECK(twice[0].y == p.y);
}

TEST_CASE("representative check on the n = 13 pipeline") {
  auto f13 = *factorize(13, table());
  Quadruple q = quad_from_parts(f13, {13, 1, 1, 1});
  RationalPoint p = point_from_solution(*search_global(q, 10, true));
  auto rep = representative_check(p);
  CHECK(rep.passing_count == 1);
  CHECK(rep.unique);
  CHECK(rep.v3_ok);
  CHECK(rep.product_is_9n4);
  CHECK(rep.representative_x == mpq_class(169, 4));
}

TEST_CASE("torsion input is rejected") {
  RationalPoint torsion{13, mpq_class(13), mpq_class(0)};
  CHECK(on_curve(torsion));
  CHECK_THROWS_AS((void)coset_translates(torsion), std::invalid_argument);
}

TEST_CASE("two torsion points") {
  auto pts = two_torsion(5);
  CHECK(!pts[0].has_value());  // point at infinity
  REQUIRE(pts[1].has_value());
  CHECK(pts[1]->first == 0);
  CHECK(pts[2]->first == -15);
  CHECK(pts[3]->first == 5);
  for (int i = 1; i < 4; ++i) {
    CHECK(pts[i]->second == 0);
    RationalPoint p{5, pts[i]->first, pts[i]->second};
    CHECK(on_curve(p));
  }
}

TEST_CASE("rank evidence for n = 5 and n = 13") {
  auto f5 = *factorize(5, table());
  auto ev5 = rank_lower_bound(f5, 10);
  CHECK(ev5.quadruples_with_solution == 2);
  CHECK(ev5.quadruples_with_nondegenerate_solution == 0);
  CHECK(ev5.r_all == 1);
  CHECK(!ev5.r_nondeg.has_value());
  CHECK(ev5.within_local_bound);
  // r_all <= s whenever both are defined.
  CHECK(*ev5.r_all <= *relaxed_count(f5).s);

  auto f13 = *factorize(13, table());
  auto ev13 = rank_lower_bound(f13, 100);
  CHECK(ev13.quadruples_with_solution == 4);
  CHECK(ev13.within_local_bound);
  CHECK(*ev13.r_all <= *relaxed_count(f13).s);
}
