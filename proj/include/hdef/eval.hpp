#pragma once

// Membership certification for formula-defined sets in truncated local
// fields: soundness certificates for the containment in O, constructive
// witnesses for the converse, and verification sweeps combining both.

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hdef/ffield.hpp"
#include "hdef/formula.hpp"
#include "hdef/intpoly.hpp"
#include "hdef/localfield.hpp"
#include "hdef/refute.hpp"
#include "hdef/residue.hpp"

namespace hdef {

// --- formula identities -----------------------------------------------------

enum class FormulaKind { eta_f, finite, eta_k, uniformk, uniform };

struct FormulaSpec {
  FormulaKind kind = FormulaKind::eta_f;
  IntPoly f;             // eta_f, finite, eta_k
  std::uint64_t q = 0;   // finite
  std::uint32_t p = 0;   // eta_k, uniformk
  int k = 0;             // eta_k
  int m = 0;             // uniformk
  int N = 0;             // uniform

  static FormulaSpec make_eta_f(IntPoly f);
  /// f defaults to the lifted nonroot polynomial of F_q.
  static FormulaSpec make_finite(std::uint64_t q, std::optional<IntPoly> f = std::nullopt);
  static FormulaSpec make_eta_k(std::uint32_t p, int k, IntPoly f);
  static FormulaSpec make_uniformk(std::uint32_t p, int m);
  static FormulaSpec make_uniform(int N);

  /// e.g. "finite(q=2,f=X^2+X+1)"
  std::string id() const;
  Formula build() const;
};

// --- certificates -----------------------------------------------------------

struct SoundnessCert {
  IntPoly f;
  std::string field;
  bool monic = false;
  bool no_root_scan = false;
  bool squarefree = false;
  std::vector<std::string> conclusions;

  bool valid() const noexcept { return monic && no_root_scan; }
};

/// Exhaustive root scan of f-bar over the residue field. A valid certificate
/// gives f(K)^-1 in O and hence phi_f(K), psi_f(K), eta_f(K) in O. Throws
/// std::invalid_argument for non-monic f.
SoundnessCert soundness_certificate(const IntPoly& f, const LocalField& K);

inline constexpr int kUnassignedResidual = std::numeric_limits<int>::min() / 4;

/// Least agreement over the equations of the best satisfied branch: minimum
/// over conjunctions, maximum over disjunctions. Equations mentioning an
/// unassigned variable score kUnassignedResidual.
int residual(const Formula& f, const LocalField& K, const LocalElem& x, const Assignment& w);

struct WitnessCert {
  std::string formula_id;
  Assignment assignment;
  int residual = kUnassignedResidual;
  /// Disjuncts / conjunct branches used, e.g. {"k3"} or {"n2:sqrt", "n3:eta"}.
  std::vector<std::string> branches;

  bool valid(int precision) const noexcept { return residual >= precision; }
};

// --- witness pieces ---------------------------------------------------------

/// Smallest a-bar (element code order) with f-bar'(a-bar) != 0.
std::optional<FqElem> choose_a(const IntPoly& f, const FieldPtr& residue);

struct PhiWitness {
  LocalElem y, z, y1, z1;
};

/// y1 - z1 = u with y1 f(y) = z1 f(z) = 1: z = a, y = Hensel root b of
/// f - (f(a)^-1 + u)^-1 near a. Throws std::invalid_argument when val(u) < 1
/// and HypothesisViolation when f'(a) is not a unit.
PhiWitness witness_u_in_m(const LocalField& K, const IntPoly& f, const LocalElem& a, const LocalElem& u);

/// Lexicographically first (y-bar, z-bar) with f(y) f(z) = r^-1, for every
/// nonzero residue r.
class ProductWitnessTable {
 public:
  ProductWitnessTable(const IntPoly& f, const FieldPtr& residue);

  std::optional<std::pair<FqElem, FqElem>> lookup(FqElem r) const;
  bool covers_all() const noexcept { return missing_.empty(); }
  const std::vector<FqElem>& missing() const noexcept { return missing_; }

 private:
  std::vector<std::uint32_t> y_;  // code + 1, 0 if no pair
  std::vector<std::uint32_t> z_;
  std::vector<FqElem> missing_;
};

struct PsiWitness {
  LocalElem y, z, y1, z1, t;
};

/// t = f(y)^-1 f(z)^-1 with residue r != 0. Throws HypothesisViolation when
/// the residue pair does not exist.
PsiWitness witness_t_residue(const LocalField& K, const IntPoly& f, FqElem r, const ProductWitnessTable& table);

/// Square root of the integer n in K, if n is a square there.
std::optional<LocalElem> integer_sqrt(const LocalField& K, std::int64_t n);

/// Precomputes everything witness construction needs for one (formula, K).
class WitnessBuilder {
 public:
  WitnessBuilder(const FormulaSpec& spec, const LocalField& K);
  ~WitnessBuilder();
  WitnessBuilder(WitnessBuilder&&) noexcept;

  const Formula& formula() const noexcept;
  /// Throws HypothesisViolation (x outside the handled set, coverage gap) or
  /// PrecisionExhausted.
  WitnessCert build(const LocalElem& x) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Single-shot WitnessBuilder(spec, K).build(x).
WitnessCert construct_witness(const FormulaSpec& spec, const LocalField& K, const LocalElem& x);

// --- uniform conjunction ----------------------------------------------------

struct ConjunctStatus {
  std::int64_t n = 0;
  bool square = false;      // (exists y)(y^2 = n) holds in K
  bool cert_valid = false;  // soundness certificate for X^2 - n
};

struct UniformVerdict {
  enum class Membership { accepted, rejected, undetermined };
  Membership membership = Membership::undetermined;
  std::vector<ConjunctStatus> conjuncts;
  std::optional<WitnessCert> witness;
  std::int64_t rejecting_conjunct = 0;
  std::string reason;
};

class UniformEvaluator {
 public:
  /// K must have an odd prime residue field; throws std::invalid_argument
  /// otherwise.
  UniformEvaluator(int N, const LocalField& K);

  const std::vector<ConjunctStatus>& conjuncts() const noexcept { return conjuncts_; }
  const WitnessBuilder& builder() const noexcept { return builder_; }
  UniformVerdict evaluate(const LocalElem& x) const;

 private:
  int N_;
  LocalField K_;
  std::vector<ConjunctStatus> conjuncts_;
  WitnessBuilder builder_;
};

UniformVerdict eval_uniform(int N, const LocalField& K, const LocalElem& x);

// --- verification sweeps ----------------------------------------------------

enum class Claim { defines_valuation_ring, defines_whole_field, none };
enum class Verdict { pass, fail, expected_partial };

std::string to_string(Claim c);
std::string to_string(Verdict v);

/// Elements: zero, then for every valuation in [val_lo, val_hi] every leading
/// digit (at most lead_cap seeded leading digits away from valuation 0), each
/// with tails_per_lead seeded tails.
struct SamplePlan {
  int val_lo = -LocalField::kDefaultWindow;
  int val_hi = LocalField::kDefaultPrecision - 1;
  std::uint32_t lead_cap = 64;
  int tails_per_lead = 1;
  std::uint64_t seed = 1;
  RefuteConfig refute;
  bool parallel = true;
};

std::vector<LocalElem> sample_elements(const LocalField& K, const SamplePlan& plan);

struct ElementVerdict {
  std::string x;
  int valuation = 0;  // kInfinitePrecision for zero
  bool in_ring = true;
  std::string outcome;  // "witness", "weak-witness", "no-witness", "rejected"
  std::optional<int> residual;
  std::vector<std::string> branches;
  std::string error;
  std::optional<RefuteRecord> refutation;
  bool ok = false;
};

struct VerifyReport {
  static constexpr int kVersion = 1;
  std::string field;
  std::string formula_id;
  std::string formula_text;
  int precision = 0;
  SamplePlan plan;
  Claim claim = Claim::none;
  std::string claim_reason;
  std::vector<std::string> responsible;
  std::vector<SoundnessCert> certificates;
  std::vector<CoverageRecord> coverage;
  std::vector<ElementVerdict> elements;
  std::size_t witnesses = 0;
  std::size_t rejections = 0;
  std::size_t failures = 0;
  Verdict verdict = Verdict::expected_partial;
};

/// Which definability claim holds for (spec, K), with the certificates and
/// coverage records behind it.
struct ClaimAnalysis {
  Claim claim = Claim::none;
  std::string reason;
  std::vector<std::string> responsible;
  std::vector<SoundnessCert> certificates;
  std::vector<CoverageRecord> coverage;
  /// Negative-valuation samples are rejected by a valid certificate.
  bool rejection_certified = false;
  /// Formula refuted for negative-valuation samples (a conjunct of the
  /// uniform formula, the formula itself otherwise).
  std::optional<Formula> refute_target;
};

ClaimAnalysis analyze_claim(const FormulaSpec& spec, const LocalField& K);

/// OpenMP over samples unless plan.parallel is false.
VerifyReport verify_definition(const FormulaSpec& spec, const LocalField& K, const SamplePlan& plan);

namespace serial {
VerifyReport verify_definition(const FormulaSpec& spec, const LocalField& K, SamplePlan plan);
}  // namespace serial

}  // namespace hdef
