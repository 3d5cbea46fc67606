#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hdef/ffield.hpp"

namespace hdef {

/// Polynomial in Z[X], lowest degree first, no trailing zeros.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<std::int64_t> coeffs);

  const std::vector<std::int64_t>& coeffs() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == 1; }
  std::int64_t coeff(int i) const noexcept;
  IntPoly derivative() const;

  friend bool operator==(const IntPoly&, const IntPoly&) = default;

 private:
  std::vector<std::int64_t> coeffs_;
};

std::string format_int_poly(const IntPoly& f);
IntPoly parse_int_poly(std::string_view text);

/// Image of f under Z -> F_p -> F.
FqPoly reduce(const IntPoly& f, const FieldPtr& field);

namespace detail {

struct PolyTerm {
  bool negative = false;
  std::string coeff;  // empty means 1
  int exponent = 0;
  std::size_t position = 0;
};

/// Tokenizes "c*X^e" sums; shared by the integer and finite-field parsers.
std::vector<PolyTerm> split_poly_terms(std::string_view text);

}  // namespace detail
}  // namespace hdef
