#pragma once

// Bounded brute-force search for witnesses of existential-positive formulas,
// over truncated local-field elements (approximate equality) or over a finite
// field (exact equality).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hdef/ffield.hpp"
#include "hdef/formula.hpp"
#include "hdef/localfield.hpp"

namespace hdef {

using Assignment = std::map<std::string, LocalElem>;

/// Search domain: zero plus every element with valuation in [val_lo, val_hi]
/// and 1 + tail_digits digits. An equation holds when both sides agree to
/// absolute precision 1 + tail_digits. The free variable is cut to the same
/// shape before searching. `budget` bounds the number of equation
/// evaluations.
struct RefuteConfig {
  bool enabled = true;
  int val_lo = -2;
  int val_hi = 2;
  int tail_digits = 2;
  std::uint64_t budget = 20'000;
  /// verify_definition refutes at most this many negative-valuation samples
  std::size_t max_samples = 256;
};

struct RefuteRecord {
  std::uint64_t domain_size = 0;
  std::uint64_t nodes = 0;
  std::size_t clauses = 0;
  bool exhausted = false;      // budget ran out before the search finished
  bool witness_found = false;  // some tuple satisfied (or could satisfy) the formula
  bool refuted = false;        // search finished without a witness
};

/// Searches for a witness at x with val(x) < 0; undetermined equations count
/// as satisfiable. A conjunction is refuted as soon as one conjunct is, each
/// conjunct getting its own budget. Throws std::invalid_argument when
/// val(x) >= 0.
RefuteRecord bounded_refute(const Formula& f, const LocalField& K, const LocalElem& x, const RefuteConfig& cfg);

struct FindResult {
  std::optional<Assignment> witness;
  RefuteRecord record;
};

/// Same search run to find a witness at any x; undetermined equations count
/// as failing.
FindResult find_witness(const Formula& f, const LocalField& K, const LocalElem& x, const RefuteConfig& cfg);

/// Truth of f at x when interpreted in the finite field itself.
bool finite_holds(const Formula& f, const FieldPtr& field, FqElem x);
/// {x in F : F |= f(x)}, ascending.
std::vector<FqElem> finite_defined_set(const Formula& f, const FieldPtr& field);

}  // namespace hdef
