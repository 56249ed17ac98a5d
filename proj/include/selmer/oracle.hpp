#pragma once

// Independent ground truth for the descent layer: brute-force p-adic
// solvability of the quadric system, exhaustive global solution search,
// reconstruction of rational points on y^2 = x(x+3n)(x-n) in exact
// arithmetic, and verification of the coset-representative normalization.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <optional>

#include "selmer/arith.hpp"

namespace selmer {

enum class Solvability { kSolvable, kUnsolvable, kInconclusive };

struct PadicVerdict {
  Solvability value = Solvability::kInconclusive;
  int depth_used = 0;
};

inline constexpr int kDefaultPadicDepth = 6;

// Decides whether the system has a nontrivial Q_p solution by searching
// solution vectors mod p: a point where the Jacobian has row rank 2 lifts
// (solvable); singular solutions branch by scaling their vanishing
// coordinates by p and recursing; a fully exhausted tree is unsolvable;
// hitting the depth limit yields inconclusive. Requires p | n, p odd prime.
PadicVerdict padic_solvable(const Quadruple& q, uint64_t p,
                            int depth = kDefaultPadicDepth);

struct SystemSolution {
  Quadruple quadruple;
  int64_t x = 0, w = 0, y = 0, z = 0;
  bool degenerate = false;  // some coordinate is zero
};

// Exhaustive search over 0 <= X, W <= bound for integer solutions (Y, Z
// recovered by perfect-square tests); returns the least solution in
// (X, W) order, or nullopt. With require_nondegenerate, zero-coordinate
// solutions are skipped.
std::optional<SystemSolution> search_global(const Quadruple& q, uint64_t bound,
                                            bool require_nondegenerate = false);

struct RationalPoint {
  uint64_t n = 0;
  mpq_class x, y;
};

bool on_curve(const RationalPoint& p);

// x = n1^2 n2 n3 X^2 / W^2, y = (n1 n2 n3)^2 XYZ / W^3, verified on the
// curve exactly. Throws std::invalid_argument on degenerate input.
RationalPoint point_from_solution(const SystemSolution& sol);

// The square-free parts of (x, x+3n, x-n) recover (n2 n3, n1 n3, n1 n2);
// equivalently each ratio is a square of a positive rational.
bool theta_class_consistent(const RationalPoint& p, const Quadruple& q);

// Translates of P by (0,0), (n,0), (-3n,0), in that order, computed by the
// chord group law and verified on the curve. Throws on torsion input.
std::array<RationalPoint, 3> coset_translates(const RationalPoint& p);

struct RepresentativeReport {
  int passing_count = 0;       // points with x > 0 and |x|_2 != 1
  bool unique = false;         // passing_count == 1
  bool v3_ok = false;          // the unique representative has v3(x) <= 0
  bool product_is_9n4 = false; // the four x-coordinates multiply to 9 n^4
  mpq_class representative_x;  // valid when unique
};

RepresentativeReport representative_check(const RationalPoint& p);

// {Theta, (0,0), (-3n,0), (n,0)}; index 0 is the point at infinity.
std::array<std::optional<std::pair<mpq_class, mpq_class>>, 4> two_torsion(
    uint64_t n);

struct RankEvidence {
  uint64_t quadruples_with_solution = 0;
  uint64_t quadruples_with_nondegenerate_solution = 0;
  std::optional<int> r_all;     // log2 of the first count, when a power of 2
  std::optional<int> r_nondeg;  // log2 of the second, when a power of 2
  bool within_local_bound = false;  // solutions subset of local passers
};

// Lower-bound evidence only: search incompleteness is acknowledged.
RankEvidence rank_lower_bound(const Factorization& f, uint64_t bound);

}  // namespace selmer
