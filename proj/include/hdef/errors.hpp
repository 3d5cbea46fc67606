#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hdef {

/// Cancellation or division left no trustworthy digit at working precision.
class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A construction hypothesis (Hensel condition, coverage, monicity) did not hold.
class HypothesisViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A desk-scale size guard was exceeded.
class SizeGuardExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace hdef
