#include "selmer/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "selmer/descent.hpp"

namespace selmer {

namespace {

// --- p-adic branch-and-lift -------------------------------------------
//
// Coefficients are tracked as unit * p^val with the unit parts fixed for
// the whole call: eq1 = (n1, 3 n4, -n2) over (X, W, Y) and
// eq2 = (n1, -n4, -n3) over (X, W, Z). Scaling a variable by p adds 2 to
// the valuations of its coefficients; each equation is divided by the
// minimum valuation of its triple, so the unit parts never change.

struct PadicContext {
  uint64_t p = 0;
  std::array<uint64_t, 3> unit1{}, unit2{};  // unit parts mod p, in [1, p)
  std::vector<int32_t> sqrt_of;              // a square root per QR, else -1
  // Verdicts derived from complete subtrees only; pruned results are
  // path-dependent and must not be reused.
  std::map<std::array<int, 6>, Solvability> memo;
  std::vector<std::array<int, 6>> path;  // ancestor states, for cycle cuts
  int depth_limit = 0;
  int depth_used = 0;
};

struct PadicOutcome {
  Solvability value = Solvability::kInconclusive;
  bool pruned = false;  // a cycle cut or the depth limit fired beneath
};

uint64_t pow_mod(uint64_t b, uint64_t e, uint64_t p) {
  uint64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

// Square roots of t mod p, via the precomputed table.
int sqrt_choices(const PadicContext& ctx, uint64_t t, uint64_t out[2]) {
  if (t == 0) {
    out[0] = 0;
    return 1;
  }
  int32_t s = ctx.sqrt_of[t];
  if (s < 0) return 0;
  out[0] = static_cast<uint64_t>(s);
  out[1] = ctx.p - static_cast<uint64_t>(s);
  return 2;
}

PadicOutcome padic_decide(PadicContext& ctx, std::array<int, 6> vals,
                          int depth) {
  ctx.depth_used = std::max(ctx.depth_used, ctx.depth_limit - depth);
  // Normalize: divide each equation by its minimum coefficient valuation.
  int m1 = std::min({vals[0], vals[1], vals[2]});
  int m2 = std::min({vals[3], vals[4], vals[5]});
  for (int k = 0; k < 3; ++k) vals[k] -= m1;
  for (int k = 3; k < 6; ++k) vals[k] -= m2;

  if (auto it = ctx.memo.find(vals); it != ctx.memo.end())
    return {it->second, false};

  // Returning to an ancestor state composes to dividing every coordinate
  // by the same positive power of p: infinite descent, so no solution can
  // thread this branch.
  for (const auto& ancestor : ctx.path) {
    if (ancestor == vals) return {Solvability::kUnsolvable, true};
  }

  const uint64_t p = ctx.p;
  uint64_t c1[3], c2[3];
  for (int k = 0; k < 3; ++k) {
    c1[k] = vals[k] == 0 ? ctx.unit1[k] : 0;
    c2[k] = vals[k + 3] == 0 ? ctx.unit2[k] : 0;
  }
  uint64_t inv_c1y = c1[2] ? pow_mod(c1[2], p - 2, p) : 0;
  uint64_t inv_c2z = c2[2] ? pow_mod(c2[2], p - 2, p) : 0;

  bool found_any = false;
  bool singular_masks[16] = {};
  for (uint64_t x = 0; x < p; ++x) {
    uint64_t ax = c1[0] * (x * x % p) % p;
    uint64_t dx = c2[0] * (x * x % p) % p;
    for (uint64_t w = 0; w < p; ++w) {
      uint64_t w2 = w * w % p;
      uint64_t t1 = (ax + c1[1] * w2) % p;
      uint64_t t2 = (dx + c2[1] * w2) % p;
      uint64_t ys[2], zs[2];
      int ny, nz;
      if (c1[2] != 0) {
        ny = sqrt_choices(ctx, (p - t1) % p * inv_c1y % p, ys);
      } else if (t1 != 0) {
        continue;
      } else {
        // Y is unconstrained mod p; its value affects nothing here, so two
        // representatives (zero / unit) cover all zero-mask patterns.
        ys[0] = 0;
        ys[1] = 1;
        ny = 2;
      }
      if (c2[2] != 0) {
        nz = sqrt_choices(ctx, (p - t2) % p * inv_c2z % p, zs);
      } else if (t2 != 0) {
        continue;
      } else {
        zs[0] = 0;
        zs[1] = 1;
        nz = 2;
      }
      for (int iy = 0; iy < ny; ++iy) {
        for (int iz = 0; iz < nz; ++iz) {
          uint64_t y = ys[iy], z = zs[iz];
          if (x == 0 && w == 0 && y == 0 && z == 0) continue;
          found_any = true;
          // Jacobian rows mod p, constant factor 2 dropped (p odd):
          // r1 = (c1x*x, c1w*w, c1y*y, 0), r2 = (c2x*x, c2w*w, 0, c2z*z).
          uint64_t r1[4] = {c1[0] * x % p, c1[1] * w % p, c1[2] * y % p, 0};
          uint64_t r2[4] = {c2[0] * x % p, c2[1] * w % p, 0, c2[2] * z % p};
          bool rank2 = false;
          for (int a = 0; a < 4 && !rank2; ++a) {
            for (int b = a + 1; b < 4 && !rank2; ++b) {
              if ((r1[a] * r2[b] + p * p - r1[b] * r2[a]) % p != 0)
                rank2 = true;
            }
          }
          if (rank2) {
            ctx.memo[vals] = Solvability::kSolvable;
            return {Solvability::kSolvable, false};
          }
          int mask = (x == 0 ? 1 : 0) | (w == 0 ? 2 : 0) | (y == 0 ? 4 : 0) |
                     (z == 0 ? 8 : 0);
          singular_masks[mask] = true;
        }
      }
    }
  }

  if (!found_any) {
    ctx.memo[vals] = Solvability::kUnsolvable;
    return {Solvability::kUnsolvable, false};
  }
  if (depth == 0) return {Solvability::kInconclusive, true};

  // mask 0 = a singular point with all coordinates units; scaling cannot
  // refine it, so it can only surface as inconclusive.
  bool any_inconclusive = singular_masks[0];
  bool pruned = singular_masks[0];
  ctx.path.push_back(vals);
  for (int mask = 1; mask < 16; ++mask) {
    if (!singular_masks[mask]) continue;
    std::array<int, 6> child = vals;
    if (mask & 1) {
      child[0] += 2;
      child[3] += 2;
    }
    if (mask & 2) {
      child[1] += 2;
      child[4] += 2;
    }
    if (mask & 4) child[2] += 2;
    if (mask & 8) child[5] += 2;
    PadicOutcome v = padic_decide(ctx, child, depth - 1);
    if (v.value == Solvability::kSolvable) {
      ctx.path.pop_back();
      ctx.memo[vals] = Solvability::kSolvable;
      return {Solvability::kSolvable, false};
    }
    if (v.value == Solvability::kInconclusive) any_inconclusive = true;
    pruned = pruned || v.pruned;
  }
  ctx.path.pop_back();
  if (any_inconclusive) return {Solvability::kInconclusive, true};
  if (!pruned) ctx.memo[vals] = Solvability::kUnsolvable;
  return {Solvability::kUnsolvable, pruned};
}

int valuation(uint64_t v, uint64_t p) {
  int e = 0;
  while (v % p == 0) {
    v /= p;
    ++e;
  }
  return e;
}

uint64_t isqrt_u64(uint64_t v) {
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

mpq_class make_rational(const mpz_class& num, const mpz_class& den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

// v_p of a nonzero rational.
long rational_valuation(const mpq_class& q, unsigned long p) {
  mpz_class tmp;
  long vn = static_cast<long>(
      mpz_remove(tmp.get_mpz_t(), q.get_num().get_mpz_t(),
                 mpz_class(p).get_mpz_t()));
  long vd = static_cast<long>(
      mpz_remove(tmp.get_mpz_t(), q.get_den().get_mpz_t(),
                 mpz_class(p).get_mpz_t()));
  return vn - vd;
}

mpq_class curve_rhs(uint64_t n, const mpq_class& x) {
  mpq_class n3{3 * mpz_class(n)};
  mpq_class nn{mpz_class(n)};
  return x * (x + n3) * (x - nn);
}

// Chord-law translate of a non-torsion point by the order-2 point (t, 0).
RationalPoint translate_by(const RationalPoint& p, const mpq_class& t) {
  mpq_class lambda = p.y / (p.x - t);
  mpq_class two_n(2 * mpz_class(p.n));
  mpq_class x3 = lambda * lambda - two_n - p.x - t;
  mpq_class y3 = lambda * (p.x - x3) - p.y;
  return RationalPoint{p.n, x3, y3};
}

bool is_rational_square(const mpq_class& q) {
  if (sgn(q) < 0) return false;
  return mpz_perfect_square_p(q.get_num().get_mpz_t()) &&
         mpz_perfect_square_p(q.get_den().get_mpz_t());
}

}  // namespace

PadicVerdict padic_solvable(const Quadruple& q, uint64_t p, int depth) {
  const Factorization& f = *q.base;
  if (depth < 1) throw std::invalid_argument("padic_solvable: depth must be >= 1");
  bool divides = false;
  for (uint32_t fp : f.prime_span()) divides = divides || fp == p;
  if (!divides || p == 2)
    throw std::invalid_argument("padic_solvable: p = " + std::to_string(p) +
                                " is not an odd prime factor of n");

  PadicContext ctx;
  ctx.p = p;
  ctx.depth_limit = depth;
  int64_t base1[3] = {static_cast<int64_t>(q.parts[0]),
                      3 * static_cast<int64_t>(q.parts[3]),
                      -static_cast<int64_t>(q.parts[1])};
  int64_t base2[3] = {static_cast<int64_t>(q.parts[0]),
                      -static_cast<int64_t>(q.parts[3]),
                      -static_cast<int64_t>(q.parts[2])};
  std::array<int, 6> vals{};
  for (int k = 0; k < 3; ++k) {
    uint64_t m1 = static_cast<uint64_t>(std::abs(base1[k]));
    uint64_t m2 = static_cast<uint64_t>(std::abs(base2[k]));
    vals[k] = valuation(m1, p);
    vals[k + 3] = valuation(m2, p);
    for (int e = 0; e < vals[k]; ++e) m1 /= p;
    for (int e = 0; e < vals[k + 3]; ++e) m2 /= p;
    uint64_t r1 = m1 % p, r2 = m2 % p;
    ctx.unit1[k] = base1[k] < 0 ? (p - r1) % p : r1;
    ctx.unit2[k] = base2[k] < 0 ? (p - r2) % p : r2;
  }
  ctx.sqrt_of.assign(p, -1);
  for (uint64_t t = 0; t < p; ++t) {
    uint64_t r = t * t % p;
    if (ctx.sqrt_of[r] < 0) ctx.sqrt_of[r] = static_cast<int32_t>(t);
  }

  PadicVerdict verdict;
  verdict.value = padic_decide(ctx, vals, depth).value;
  verdict.depth_used = ctx.depth_used;
  return verdict;
}

std::optional<SystemSolution> search_global(const Quadruple& q, uint64_t bound,
                                            bool require_nondegenerate) {
  const int64_t n1 = static_cast<int64_t>(q.parts[0]);
  const int64_t n2 = static_cast<int64_t>(q.parts[1]);
  const int64_t n3 = static_cast<int64_t>(q.parts[2]);
  const int64_t n4 = static_cast<int64_t>(q.parts[3]);
  const int64_t b = static_cast<int64_t>(bound);
  if (b <= 0) throw std::invalid_argument("search_global: bound must be >= 1");
  // 3 n4 W^2 and n1 X^2 must fit well inside int64.
  if (b > 100'000'000 ||
      static_cast<int64_t>(q.base->value) > (int64_t{1} << 60) / (3 * b * b))
    throw std::invalid_argument("search_global: bound too large for n");

  for (int64_t x = 0; x <= b; ++x) {
    const int64_t ax = n1 * x * x;
    for (int64_t w = (x == 0 ? 1 : 0); w <= b; ++w) {
      int64_t u2 = ax - n4 * w * w;
      if (u2 < 0) break;  // decreasing in w
      int64_t u1 = ax + 3 * n4 * w * w;
      if (u1 == 0) continue;  // only at (0, 0)
      if (u1 % n2 != 0 || u2 % n3 != 0) continue;
      uint64_t y2 = static_cast<uint64_t>(u1 / n2);
      uint64_t z2 = static_cast<uint64_t>(u2 / n3);
      uint64_t y = isqrt_u64(y2), z = isqrt_u64(z2);
      if (y * y != y2 || z * z != z2) continue;
      SystemSolution sol;
      sol.quadruple = q;
      sol.x = x;
      sol.w = w;
      sol.y = static_cast<int64_t>(y);
      sol.z = static_cast<int64_t>(z);
      sol.degenerate = x == 0 || w == 0 || y == 0 || z == 0;
      if (require_nondegenerate && sol.degenerate) continue;
      return sol;
    }
  }
  return std::nullopt;
}

bool on_curve(const RationalPoint& p) {
  return p.y * p.y == curve_rhs(p.n, p.x);
}

RationalPoint point_from_solution(const SystemSolution& sol) {
  if (sol.degenerate)
    throw std::invalid_argument(
        "point_from_solution: degenerate solution maps to a torsion "
        "translate, not a fresh point");
  const auto& parts = sol.quadruple.parts;
  mpz_class n1(static_cast<unsigned long>(parts[0]));
  mpz_class n2(static_cast<unsigned long>(parts[1]));
  mpz_class n3(static_cast<unsigned long>(parts[2]));
  mpz_class X(static_cast<long>(sol.x)), W(static_cast<long>(sol.w));
  mpz_class Y(static_cast<long>(sol.y)), Z(static_cast<long>(sol.z));

  RationalPoint p;
  p.n = sol.quadruple.base->value;
  p.x = make_rational(n1 * n1 * n2 * n3 * X * X, W * W);
  p.y = make_rational(n1 * n1 * n2 * n2 * n3 * n3 * X * Y * Z, W * W * W);
  if (!on_curve(p) || sgn(p.x) <= 0)
    throw std::logic_error("point_from_solution: reconstruction failed");
  return p;
}

bool theta_class_consistent(const RationalPoint& p, const Quadruple& q) {
  mpz_class n(static_cast<unsigned long>(p.n));
  mpq_class sf1(mpz_class(static_cast<unsigned long>(q.parts[1])) *
                static_cast<unsigned long>(q.parts[2]));
  mpq_class sf2(mpz_class(static_cast<unsigned long>(q.parts[0])) *
                static_cast<unsigned long>(q.parts[2]));
  mpq_class sf3(mpz_class(static_cast<unsigned long>(q.parts[0])) *
                static_cast<unsigned long>(q.parts[1]));
  return is_rational_square(p.x / sf1) &&
         is_rational_square((p.x + mpq_class(3 * n)) / sf2) &&
         is_rational_square((p.x - mpq_class(n)) / sf3);
}

std::array<RationalPoint, 3> coset_translates(const RationalPoint& p) {
  if (!on_curve(p))
    throw std::invalid_argument("coset_translates: point not on the curve");
  mpz_class n(static_cast<unsigned long>(p.n));
  if (p.y == 0)
    throw std::invalid_argument("coset_translates: torsion input rejected");

  std::array<RationalPoint, 3> out = {
      translate_by(p, mpq_class(0)),
      translate_by(p, mpq_class(n)),
      translate_by(p, mpq_class(-3 * n)),
  };
  // The printed x-coordinates of the three translates, checked exactly.
  mpq_class expect0 = mpq_class(-3 * n * n) / p.x;
  mpq_class expect1 = mpq_class(n) * (p.x + mpq_class(3 * n)) /
                      (p.x - mpq_class(n));
  mpq_class expect2 = mpq_class(-3 * n) * (p.x - mpq_class(n)) /
                      (p.x + mpq_class(3 * n));
  if (out[0].x != expect0 || out[1].x != expect1 || out[2].x != expect2)
    throw std::logic_error("coset_translates: x-coordinate mismatch");
  for (const auto& t : out) {
    if (!on_curve(t)) throw std::logic_error("coset_translates: off curve");
  }
  return out;
}

RepresentativeReport representative_check(const RationalPoint& p) {
  auto translates = coset_translates(p);
  std::array<const RationalPoint*, 4> pts = {&p, &translates[0],
                                             &translates[1], &translates[2]};
  RepresentativeReport rep;
  mpq_class product(1);
  for (const RationalPoint* pt : pts) {
    product *= pt->x;
    if (sgn(pt->x) > 0 && rational_valuation(pt->x, 2) != 0) {
      ++rep.passing_count;
      rep.representative_x = pt->x;
    }
  }
  rep.unique = rep.passing_count == 1;
  if (rep.unique) rep.v3_ok = rational_valuation(rep.representative_x, 3) <= 0;
  mpz_class n(static_cast<unsigned long>(p.n));
  rep.product_is_9n4 = product == mpq_class(9 * n * n * n * n);
  return rep;
}

std::array<std::optional<std::pair<mpq_class, mpq_class>>, 4> two_torsion(
    uint64_t n) {
  mpz_class nz(static_cast<unsigned long>(n));
  return {std::nullopt,
          std::make_pair(mpq_class(0), mpq_class(0)),
          std::make_pair(mpq_class(-3 * nz), mpq_class(0)),
          std::make_pair(mpq_class(nz), mpq_class(0))};
}

RankEvidence rank_lower_bound(const Factorization& f, uint64_t bound) {
  RankEvidence ev;
  DescentResult local = relaxed_count(f);
  ev.within_local_bound = true;
  uint64_t total = quadruple_count(f);
  for (uint64_t code = 0; code < total; ++code) {
    Quadruple q = make_quadruple(f, code);
    auto any = search_global(q, bound);
    if (!any) continue;
    ++ev.quadruples_with_solution;
    bool locally_ok = std::find(local.passing.begin(), local.passing.end(),
                                code) != local.passing.end();
    if (!locally_ok) ev.within_local_bound = false;
    if (!any->degenerate ||
        search_global(q, bound, /*require_nondegenerate=*/true))
      ++ev.quadruples_with_nondegenerate_solution;
  }
  if (ev.quadruples_with_solution > local.count) ev.within_local_bound = false;
  if (std::has_single_bit(ev.quadruples_with_solution))
    ev.r_all = std::countr_zero(ev.quadruples_with_solution);
  if (std::has_single_bit(ev.quadruples_with_nondegenerate_solution))
    ev.r_nondeg = std::countr_zero(ev.quadruples_with_nondegenerate_solution);
  return ev;
}

}  // namespace selmer
