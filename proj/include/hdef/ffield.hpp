#pragma once

// Finite fields F_{p^n} with p^n <= 2^20, polynomials over them, and the
// constructive polynomial-existence searches used by the definability
// constructions.

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hdef {

bool is_prime(std::uint64_t n);

/// Element of a finite field, encoded as sum c_i * p^i over its coordinates
/// with respect to the power basis of the field modulus.
struct FqElem {
  std::uint32_t code = 0;
  auto operator<=>(const FqElem&) const = default;
};

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
 public:
  static constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 20;

  std::uint32_t characteristic() const noexcept { return p_; }
  int degree() const noexcept { return n_; }
  std::uint32_t order() const noexcept { return q_; }
  bool is_prime_field() const noexcept { return n_ == 1; }

  /// Monic modulus, lowest degree first (length n + 1).
  const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

  FqElem zero() const noexcept { return {0}; }
  FqElem one() const noexcept { return {1}; }
  FqElem element(std::uint32_t code) const;
  FqElem from_int(std::int64_t c) const;
  FqElem from_coords(std::span<const std::uint32_t> coords) const;
  std::vector<std::uint32_t> coords(FqElem a) const;

  FqElem add(FqElem a, FqElem b) const noexcept;
  FqElem sub(FqElem a, FqElem b) const noexcept;
  FqElem neg(FqElem a) const noexcept;
  FqElem mul(FqElem a, FqElem b) const noexcept;
  FqElem inv(FqElem a) const;
  FqElem div(FqElem a, FqElem b) const { return mul(a, inv(b)); }
  FqElem pow(FqElem a, std::uint64_t e) const noexcept;

  /// Primitive element; log/exp are taken with respect to it.
  FqElem generator() const noexcept { return {exp_[1 % (q_ - 1)]}; }
  std::uint32_t log(FqElem a) const;
  FqElem exp(std::uint64_t k) const noexcept { return {exp_[k % (q_ - 1)]}; }

  /// "[c0,c1,...]", or the bare integer for prime-subfield elements.
  std::string format(FqElem a) const;
  /// Accepts "[c0,c1,...]" or a bare integer (mapped through Z -> F_p).
  FqElem parse(std::string_view text) const;

  /// Short description, e.g. "F_2^3 mod X^3+X+1".
  std::string describe() const;

  bool same_as(const Field& other) const noexcept {
    return p_ == other.p_ && modulus_ == other.modulus_;
  }

 private:
  friend FieldPtr make_field(std::uint32_t p, int n);
  Field(std::uint32_t p, int n, std::vector<std::uint32_t> modulus);

  FqElem mul_slow(FqElem a, FqElem b) const;
  void build_tables();

  std::uint32_t p_;
  int n_;
  std::uint32_t q_;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> exp_;
};

/// F_{p^n} with the lexicographically smallest monic irreducible modulus.
/// Throws std::invalid_argument for composite p or n < 1, SizeGuardExceeded
/// when p^n > 2^20.
FieldPtr make_field(std::uint32_t p, int n);

/// Polynomial over a finite field, lowest degree first, no trailing zeros.
class FqPoly {
 public:
  explicit FqPoly(FieldPtr field);
  FqPoly(FieldPtr field, std::vector<FqElem> coeffs);
  static FqPoly from_ints(FieldPtr field, const std::vector<std::int64_t>& coeffs);
  static FqPoly monomial(FieldPtr field, FqElem c, int degree);

  const FieldPtr& field() const noexcept { return field_; }
  const std::vector<FqElem>& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_monic() const noexcept;
  FqElem coeff(int i) const noexcept;
  FqElem leading() const noexcept { return coeff(degree()); }

  FqElem eval(FqElem x) const noexcept;
  FqPoly derivative() const;
  FqPoly make_monic() const;

  friend FqPoly operator+(const FqPoly& a, const FqPoly& b);
  friend FqPoly operator-(const FqPoly& a, const FqPoly& b);
  friend FqPoly operator*(const FqPoly& a, const FqPoly& b);
  friend bool operator==(const FqPoly& a, const FqPoly& b);

 private:
  void trim();

  FieldPtr field_;
  std::vector<FqElem> coeffs_;
};

std::pair<FqPoly, FqPoly> divmod(const FqPoly& a, const FqPoly& b);
FqPoly gcd(const FqPoly& a, const FqPoly& b);

/// Re-reads a polynomial over F_p as a polynomial over an extension of F_p.
FqPoly embed(const FqPoly& f, const FieldPtr& target);

/// "X^2+X+1"; coefficients print through Field::format.
std::string format_poly(const FqPoly& f);
FqPoly parse_poly(const FieldPtr& field, std::string_view text);

/// Exhaustive trial division by every monic polynomial of degree <= deg/2.
bool poly_is_irreducible(const FqPoly& f);

/// First monic irreducible f of degree m over F_p (coefficient vectors in
/// ascending lexicographic order, highest degree most significant) with
/// f'(0) != 0.
FqPoly find_trace_poly(std::uint32_t p, int m);

struct NonrootChoice {
  int m = 0;   // smallest m >= 2 with m not dividing [F:F_p]
  FqPoly f;    // over F_p, irreducible of degree m, no root in F
  FqElem a;    // in F with f'(a) != 0 (always 0)
};
NonrootChoice find_nonroot_poly(const FieldPtr& field);

/// True iff f has no zero in `field` (exhaustive). f may live over the prime
/// subfield of `field`.
bool residue_no_root(const FqPoly& f, const FieldPtr& field);

/// gcd(f, f') is constant; false when f' = 0.
bool is_squarefree(const FqPoly& f);

/// Size guard for the quadratic-in-q coverage scan.
inline constexpr std::uint32_t kProductCoverMaxOrder = 1u << 14;

/// F == f(F) f(F) u {0}, computed exhaustively. OpenMP over target residues.
bool product_cover_check(const FqPoly& f, const FieldPtr& field);

namespace serial {
/// Reference implementation: marks every pairwise product.
bool product_cover_check(const FqPoly& f, const FieldPtr& field);
}  // namespace serial

/// Legendre symbol (n/p) by Euler's criterion. p must be an odd prime.
int legendre(std::int64_t n, std::uint64_t p);

std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m);

}  // namespace hdef
