#pragma once

// Exhaustive residue-field checks behind the witness hypotheses: coverage of F
// by q-power representatives and by products of polynomial values.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hdef/ffield.hpp"

namespace hdef {

struct CoverageRecord {
  enum class Kind { q_power, product };
  Kind kind = Kind::product;
  std::uint32_t q = 0;
  std::string field;        // Field::describe()
  std::string polynomial;   // "X^4-X" for q_power(k=2) over F_2, f otherwise
  int k = 0;                // q_power only
  bool covered = false;
  std::vector<FqElem> missing;
  std::uint64_t scan_size = 0;
};

/// Residues of roots of X^(p^k) - X, i.e. F_{p^gcd(k,n)}, against F.
CoverageRecord check_q_power_coverage(int k, const FieldPtr& field);
/// F == f(F) f(F) u {0}; size guard kProductCoverMaxOrder.
CoverageRecord check_product_coverage(const FqPoly& f, const FieldPtr& field);

/// (2d - 1)^4
std::int64_t c_bound(int d);

/// Monic, square-free, rootless polynomials of degree d over F, in ascending
/// lexicographic order.
std::vector<FqPoly> rootless_squarefree_monic(int d, const FieldPtr& field);

/// First prime power q in [q_lo, q_hi] (ascending) with a monic square-free
/// rootless polynomial of degree d whose product set misses a residue.
std::optional<std::pair<std::uint32_t, FqPoly>> find_coverage_counterexample(int d, std::uint32_t q_lo,
                                                                             std::uint32_t q_hi);

struct QuadraticSweep {
  std::uint32_t q = 0;
  std::uint64_t polynomials = 0;
  std::vector<FqPoly> failures;
};

/// product_cover_check over every monic square-free rootless quadratic over
/// F_q. OpenMP over polynomials.
QuadraticSweep sweep_quadratics(std::uint32_t q);

namespace serial {
QuadraticSweep sweep_quadratics(std::uint32_t q);
}  // namespace serial

/// F_q for a prime power q, via make_field.
FieldPtr field_of_order(std::uint64_t q);

}  // namespace hdef
