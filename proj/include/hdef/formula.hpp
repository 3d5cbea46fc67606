#pragma once

// Existential-positive formulas in the language of rings {+, -, *, 0, 1}
// and constructors for the definitions of valuation rings.
//
// Terms and formulas are immutable handles onto shared nodes; subterms may be
// shared (x^(p^k) is built by repeated squaring), but equality and printing
// treat them as trees.

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hdef/ffield.hpp"
#include "hdef/intpoly.hpp"

namespace hdef {

enum class TermOp { var, constant, add, sub, mul };

class Term {
 public:
  static Term var(std::string name);
  static Term constant(std::int64_t value);
  static Term add(Term a, Term b);
  static Term sub(Term a, Term b);
  static Term mul(Term a, Term b);

  TermOp op() const noexcept;
  const std::string& name() const;
  std::int64_t value() const;
  const Term& lhs() const;
  const Term& rhs() const;
  /// Node identity, stable for the lifetime of the term; used for memoizing
  /// evaluation of shared subterms.
  const void* id() const noexcept { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);

 private:
  friend class Formula;
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

enum class FormulaOp { equals, conj, disj, exists };

class Formula {
 public:
  static Formula equals(Term lhs, Term rhs);
  static Formula conj(std::vector<Formula> children);
  static Formula disj(std::vector<Formula> children);
  static Formula exists(std::vector<std::string> vars, Formula body);

  FormulaOp op() const noexcept;
  const Term& lhs() const;
  const Term& rhs() const;
  const std::vector<Formula>& children() const;
  const std::vector<std::string>& vars() const;
  const Formula& body() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// --- structure --------------------------------------------------------------

std::set<std::string> free_variables(const Formula& f);
/// Every binder names at least one variable, no variable is rebound inside
/// its own scope, and every connective has at least one child.
bool is_existential_positive(const Formula& f);
/// Maximum nesting of existential blocks.
int exists_depth(const Formula& f);
/// All bound variables in pre-order.
std::vector<std::string> bound_variables(const Formula& f);

// --- S-expressions ----------------------------------------------------------

std::string print(const Term& t);
std::string print(const Formula& f);
Term parse_term(std::string_view text);
Formula parse_formula(std::string_view text);

// --- constructors -----------------------------------------------------------

/// Largest exponent p^k materialized in a term.
inline constexpr std::uint64_t kMaxPowerExponent = std::uint64_t{1} << 16;

/// Monic lift of a polynomial over a prime field, coefficients in [0, p).
IntPoly lift_poly(const FqPoly& f);

/// x^e by repeated squaring; subterms are shared.
Term power_term(const Term& x, std::uint64_t e);
/// f(x) expanded as a sum of monomials, highest degree first.
Term poly_term(const IntPoly& f, const Term& x);

// `free` names the defined variable; `prefix` is prepended to every bound
// variable so that composed formulas never capture.

/// (exists y z y1 z1) (free = y1 - z1 and y1 f(y) = 1 and z1 f(z) = 1)
Formula phi_f(const IntPoly& f, const std::string& free = "x", const std::string& prefix = "");
/// (exists y z y1 z1) (free = 0 or (free = y1 z1 and y1 f(y) = 1 and z1 f(z) = 1))
Formula psi_f(const IntPoly& f, const std::string& free = "x", const std::string& prefix = "");
/// (exists u t) (free = u + t and phi_f(u) and psi_f(t))
Formula eta_f(const IntPoly& f, const std::string& free = "x", const std::string& prefix = "");
/// free^(p^k) - free = 0
Formula psi_k(std::uint32_t p, int k, const std::string& free = "x");
/// (exists u t) (free = u + t and phi_f(u) and psi_k(t))
Formula eta_k(std::uint32_t p, int k, const IntPoly& f, const std::string& free = "x",
              const std::string& prefix = "");
/// The q-power representative definition; q must be a prime power.
Formula finite_formula(std::uint64_t q, const IntPoly& f);
/// eta_f(f~) or the disjunction of eta_k(f~) over k in M, with f~ the lifted
/// trace polynomial of degree m.
Formula uniformk_formula(std::uint32_t p, int m);
/// (exists y)(y^2 = n) or eta_{X^2 - n}
Formula phi_n(std::int64_t n, const std::string& free = "x", const std::string& prefix = "");
/// Conjunction of phi_n for n = 2..N.
Formula uniform_formula(int N);

/// Bound-variable prefix used for disjunct / conjunct number `i` of the
/// uniform constructions.
std::string eta_k_prefix(int k);
inline constexpr const char* kEtaFPrefix = "f.";
std::string phi_n_prefix(std::int64_t n);

/// Decomposes q = p^n; throws std::invalid_argument if q is not a prime power.
std::pair<std::uint32_t, int> prime_power(std::uint64_t q);

}  // namespace hdef
