#pragma once

// Truncated models of the henselian valued fields F_q((t)) and Q_p.
//
// An element is stored leading-normalized: a valuation v, a unit part given by
// N digits d_0 != 0, d_1, ..., d_{N-1} (residue-field coefficients of t^i for
// Laurent series, base-p digits for p-adics) and the number of leading digits
// that are trustworthy ("known precision"). Digits past the known precision
// are stored as zero. The absolute precision of an element is v + known_prec.
//
// Public arithmetic on LocalElem throws PrecisionExhausted when cancellation
// leaves no trustworthy digit. Approx carries such results as O(X^k) so that
// polynomial evaluation and equation checks can continue through them.

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hdef/ffield.hpp"
#include "hdef/intpoly.hpp"

namespace hdef {

inline constexpr int kInfinitePrecision = std::numeric_limits<int>::max() / 4;

enum class LocalKind { laurent, padic };

class LocalElem {
 public:
  /// Exact zero.
  LocalElem() = default;

  bool is_zero() const noexcept { return zero_; }
  /// kInfinitePrecision for the exact zero.
  int valuation() const noexcept { return zero_ ? kInfinitePrecision : val_; }
  int known_prec() const noexcept { return zero_ ? kInfinitePrecision : prec_; }
  int abs_prec() const noexcept { return zero_ ? kInfinitePrecision : val_ + prec_; }
  std::span<const std::uint32_t> digits() const noexcept { return digits_; }

  friend bool operator==(const LocalElem&, const LocalElem&) = default;

 private:
  friend class LocalField;
  bool zero_ = true;
  int val_ = 0;
  int prec_ = 0;
  std::vector<std::uint32_t> digits_;
};

/// Either a LocalElem or O(X^k): a value known only to be divisible by X^k.
class Approx {
 public:
  /// Exact zero.
  Approx() : Approx(LocalElem{}) {}
  Approx(LocalElem e) : elem_(std::move(e)) {}  // NOLINT(google-explicit-constructor)
  static Approx big_oh(int k) {
    Approx a{LocalElem{}};
    a.elem_.reset();
    a.bound_ = k;
    return a;
  }

  bool is_big_oh() const noexcept { return !elem_.has_value(); }
  /// Lower bound on the valuation (exact unless is_big_oh()).
  int bound() const noexcept { return elem_ ? elem_->valuation() : bound_; }
  int abs_prec() const noexcept { return elem_ ? elem_->abs_prec() : bound_; }
  /// Throws PrecisionExhausted for O(X^k).
  const LocalElem& elem() const;

 private:
  std::optional<LocalElem> elem_;
  int bound_ = 0;
};

/// Lower bound on val(a - b); `exact` when the bound is the true valuation.
struct Agreement {
  int bound = 0;
  bool exact = false;
};

/// Sparse polynomial with coefficients in the local field.
struct LocalPoly {
  std::vector<std::pair<std::uint64_t, LocalElem>> terms;  // (exponent, coefficient)
};

/// Enumeration request for truncated elements: every valuation in
/// [val_lo, val_hi], every nonzero leading digit and every choice of the next
/// `tail_digits` digits, plus zero. In sampling mode (seed set) `samples`
/// elements are drawn uniformly instead.
struct EnumSpec {
  int val_lo = 0;
  int val_hi = 0;
  int tail_digits = 0;
  std::uint64_t budget = 1'000'000;
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 0;
};

class LocalField;

/// Single-consumer stream over an EnumSpec.
class ElementStream {
 public:
  ElementStream(const LocalField& field, EnumSpec spec);

  /// Number of elements the stream yields.
  std::uint64_t size() const noexcept { return size_; }
  std::optional<LocalElem> next();

  /// Size of the exhaustive enumeration, sampling or not.
  std::uint64_t exhaustive_size() const noexcept { return exhaustive_size_; }
  /// index-th element of the exhaustive order (0 is zero).
  LocalElem element_at(std::uint64_t index) const;

 private:

  const LocalField* field_;
  EnumSpec spec_;
  std::uint64_t exhaustive_size_ = 0;
  std::uint64_t size_ = 0;
  std::uint64_t cursor_ = 0;
  std::mt19937_64 rng_;
};

class LocalField {
 public:
  static constexpr int kDefaultPrecision = 8;
  static constexpr int kDefaultWindow = 4;

  static LocalField laurent(FieldPtr residue, int precision = kDefaultPrecision);
  /// p = 2 is accepted here; callers that need odd p check it themselves.
  static LocalField padic(std::uint32_t p, int precision = kDefaultPrecision);

  LocalKind kind() const noexcept { return kind_; }
  int precision() const noexcept { return precision_; }
  const FieldPtr& residue_field() const noexcept { return residue_; }
  std::uint32_t characteristic_of_residue() const noexcept { return residue_->characteristic(); }
  /// Number of distinct digit values (q for Laurent, p for p-adic).
  std::uint32_t digit_base() const noexcept { return residue_->order(); }
  /// Same field with a different working precision.
  LocalField with_precision(int precision) const;
  std::string describe() const;

  LocalElem zero() const { return LocalElem{}; }
  LocalElem one() const { return from_int(1); }
  LocalElem from_int(std::int64_t c) const;
  /// X^v * c with c a nonzero digit (residue field element).
  LocalElem monomial(int v, FqElem c) const;
  /// Validating constructor; digits are padded to the working precision.
  LocalElem make(int v, std::vector<std::uint32_t> digits, int known_prec) const;
  LocalElem lift_residue(FqElem r) const;
  /// Residue class of an integral element; throws std::domain_error when
  /// val(x) < 0.
  FqElem residue(const LocalElem& x) const;
  bool in_ring(const LocalElem& x) const noexcept { return x.valuation() >= 0; }
  bool in_max_ideal(const LocalElem& x) const noexcept { return x.valuation() >= 1; }

  LocalElem add(const LocalElem& x, const LocalElem& y) const;
  LocalElem sub(const LocalElem& x, const LocalElem& y) const;
  LocalElem neg(const LocalElem& x) const;
  LocalElem mul(const LocalElem& x, const LocalElem& y) const;
  LocalElem inv(const LocalElem& x) const;
  LocalElem div(const LocalElem& x, const LocalElem& y) const;
  LocalElem pow(const LocalElem& x, std::uint64_t e) const;

  Approx add(const Approx& x, const Approx& y) const;
  Approx sub(const Approx& x, const Approx& y) const;
  Approx neg(const Approx& x) const;
  Approx mul(const Approx& x, const Approx& y) const;
  Approx div(const Approx& x, const LocalElem& y) const;
  Approx pow(const Approx& x, std::uint64_t e) const;

  Agreement agreement(const Approx& x, const Approx& y) const;
  /// Drops digits beyond absolute precision k.
  Approx truncate(const Approx& x, int abs_prec) const;

  LocalPoly to_local(const IntPoly& f) const;
  LocalPoly derivative(const LocalPoly& g) const;
  Approx eval(const LocalPoly& g, const Approx& x) const;
  Approx eval_poly_approx(const IntPoly& f, const Approx& x) const;
  /// Horner evaluation of an integer polynomial; integer coefficients are
  /// mapped through Z -> O.
  LocalElem eval_poly(const IntPoly& f, const LocalElem& x) const;

  /// Newton iteration from a with val(g(a)) >= 1 and val(g'(a)) = 0. Returns b
  /// with val(g(b)) >= N and val(b - a) >= 1. Throws HypothesisViolation when
  /// the simple Hensel hypothesis fails.
  LocalElem hensel_solve(const LocalPoly& g, const LocalElem& a) const;

  ElementStream enum_elements(EnumSpec spec) const { return ElementStream(*this, std::move(spec)); }

  /// "t^v*(c0+c1*t+...)" or "p^v*(d0+d1*p+...)"; one term per known digit.
  std::string format(const LocalElem& x) const;
  LocalElem parse(std::string_view text) const;

 private:
  LocalField(LocalKind kind, FieldPtr residue, int precision);

  using Digits = std::vector<std::uint32_t>;
  Approx normalize(int v, const Digits& raw, int len) const;
  Digits add_digits(const Digits& a, const Digits& b, int len) const;
  Digits neg_digits(const Digits& a, int len) const;
  Digits mul_digits(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b, int len) const;
  Digits inv_digits(std::span<const std::uint32_t> a, int len) const;
  LocalElem from_digits(int v, Digits d, int prec) const;

  LocalKind kind_;
  FieldPtr residue_;
  int precision_;
};

}  // namespace hdef
