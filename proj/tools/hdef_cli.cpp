// hdef: synthesize defining formulas, verify them on truncated local fields,
// and run the residue-field and prime-density checks behind them.
//
// Exit codes: 0 pass, 1 fail (or a regime with no claim), 2 config error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hdef/errors.hpp"
#include "hdef/eval.hpp"
#include "hdef/formula.hpp"
#include "hdef/report.hpp"
#include "hdef/residue.hpp"
#include "hdef/uniform.hpp"

namespace {

using namespace hdef;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string kind_arg;  // formula kind for synth / verify
  std::optional<std::uint64_t> q;
  std::optional<std::uint32_t> p;
  std::optional<int> n;
  std::optional<int> k;
  std::optional<int> m;
  std::optional<int> N_formula;
  std::optional<std::string> f;
  std::string field_kind;  // laurent | padic, empty = by formula
  int V = LocalField::kDefaultWindow;
  int precision = LocalField::kDefaultPrecision;
  std::uint64_t seed = 1;
  std::uint32_t lead_cap = 64;
  int tails = 1;
  bool no_refute = false;
  std::uint64_t budget = RefuteConfig{}.budget;
  int tail_digits = RefuteConfig{}.tail_digits;
  bool serial = false;
  double epsilon = 0.1;
  std::optional<int> density_N;
  std::uint64_t X = 1'000'000;
  int degree = 3;
  std::uint32_t q_lo = 2;
  std::uint32_t q_hi = 64;
  std::string out;
  bool json = false;
};

template <class T>
T need(const std::optional<T>& v, const char* flag, const std::string& what) {
  if (!v) throw ConfigError(what + " needs " + flag);
  return *v;
}

void emit(const RunConfig& cfg, const Json& j) {
  if (!cfg.out.empty()) {
    std::ofstream os(cfg.out, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + cfg.out);
    os << dump(j);
  }
  if (cfg.json) std::cout << dump(j);
}

// Human-readable summary; moves to stderr when stdout carries JSON.
std::ostream& text(const RunConfig& cfg) { return cfg.json ? std::cerr : std::cout; }

IntPoly parse_f(const RunConfig& cfg, const std::string& what) {
  return parse_int_poly(need(cfg.f, "--f", what));
}

// --- synth ------------------------------------------------------------------

std::pair<std::string, Formula> synth_formula(const RunConfig& cfg) {
  const std::string& kind = cfg.kind_arg;
  if (kind == "phi_f") return {"phi_f", phi_f(parse_f(cfg, kind))};
  if (kind == "psi_f") return {"psi_f", psi_f(parse_f(cfg, kind))};
  if (kind == "psi_k") {
    const auto p = need(cfg.p, "--p", kind);
    const auto k = need(cfg.k, "--k", kind);
    return {"psi_k(p=" + std::to_string(p) + ",k=" + std::to_string(k) + ")", psi_k(p, k)};
  }
  FormulaSpec spec;
  if (kind == "eta_f") {
    spec = FormulaSpec::make_eta_f(parse_f(cfg, kind));
  } else if (kind == "finite") {
    std::optional<IntPoly> f;
    if (cfg.f) f = parse_int_poly(*cfg.f);
    spec = FormulaSpec::make_finite(need(cfg.q, "--q", kind), f);
  } else if (kind == "eta_k") {
    spec = FormulaSpec::make_eta_k(need(cfg.p, "--p", kind), need(cfg.k, "--k", kind), parse_f(cfg, kind));
  } else if (kind == "uniformk") {
    spec = FormulaSpec::make_uniformk(need(cfg.p, "--p", kind), need(cfg.m, "--m", kind));
  } else if (kind == "uniform") {
    spec = FormulaSpec::make_uniform(need(cfg.N_formula, "--N", kind));
  } else {
    throw ConfigError("unknown formula kind '" + kind + "'");
  }
  return {spec.id(), spec.build()};
}

int cmd_synth(const RunConfig& cfg) {
  const auto [id, f] = synth_formula(cfg);
  const Json j = synth_json(id, f);
  emit(cfg, j);
  text(cfg) << print(f) << "\n";
  return kExitPass;
}

// --- verify -----------------------------------------------------------------

LocalField make_local_field(const RunConfig& cfg, const std::string& default_kind) {
  const std::string kind = cfg.field_kind.empty() ? default_kind : cfg.field_kind;
  if (cfg.precision < 1) throw ConfigError("--N must be positive");
  if (kind == "padic") {
    const auto p = need(cfg.p, "--p", "a p-adic field");
    if (!is_prime(p)) throw ConfigError("--p must be prime");
    return LocalField::padic(p, cfg.precision);
  }
  if (kind != "laurent") throw ConfigError("--kind must be laurent or padic");
  if (cfg.q) return LocalField::laurent(field_of_order(*cfg.q), cfg.precision);
  const auto p = need(cfg.p, "--q or --p", "a Laurent field");
  if (!is_prime(p)) throw ConfigError("--p must be prime");
  return LocalField::laurent(make_field(p, cfg.n.value_or(1)), cfg.precision);
}

FormulaSpec verify_spec(const RunConfig& cfg, const LocalField& K) {
  const auto& F = *K.residue_field();
  const std::string& kind = cfg.kind_arg;
  if (kind == "finite") {
    if (cfg.q && *cfg.q != F.order()) throw ConfigError("--q disagrees with the residue field");
    std::optional<IntPoly> f;
    if (cfg.f) f = parse_int_poly(*cfg.f);
    return FormulaSpec::make_finite(F.order(), f);
  }
  if (kind == "eta_f") return FormulaSpec::make_eta_f(parse_f(cfg, kind));
  if (kind == "eta_k") return FormulaSpec::make_eta_k(F.characteristic(), need(cfg.k, "--k", kind), parse_f(cfg, kind));
  if (kind == "uniformk") return FormulaSpec::make_uniformk(F.characteristic(), need(cfg.m, "--m", kind));
  if (kind == "uniform") return FormulaSpec::make_uniform(cfg.N_formula.value_or(7));
  throw ConfigError("unknown formula kind '" + kind + "'");
}

int cmd_verify(const RunConfig& cfg) {
  const LocalField K = make_local_field(cfg, cfg.kind_arg == "uniform" ? "padic" : "laurent");
  const FormulaSpec spec = verify_spec(cfg, K);
  if (cfg.V < 0) throw ConfigError("--V must be nonnegative");
  SamplePlan plan;
  plan.val_lo = -cfg.V;
  plan.val_hi = cfg.precision - 1;
  plan.lead_cap = cfg.lead_cap;
  plan.tails_per_lead = cfg.tails;
  plan.seed = cfg.seed;
  plan.refute.enabled = !cfg.no_refute;
  plan.refute.budget = cfg.budget;
  plan.refute.tail_digits = cfg.tail_digits;
  plan.parallel = !cfg.serial;

  const VerifyReport r = verify_definition(spec, K, plan);
  emit(cfg, to_json(r));
  text(cfg) << r.formula_id << " over " << r.field << "\n"
            << "  claim:    " << to_string(r.claim) << " (" << r.claim_reason << ")\n"
            << "  samples:  " << r.elements.size() << ", witnesses " << r.witnesses << ", rejections "
            << r.rejections << ", failures " << r.failures << "\n"
            << "  verdict:  " << to_string(r.verdict) << "\n";
  return r.verdict == Verdict::pass ? kExitPass : kExitFail;
}

// --- density / residue checks ------------------------------------------------

int cmd_density(const RunConfig& cfg) {
  if (cfg.epsilon <= 0.0 || cfg.epsilon >= 1.0) throw ConfigError("--epsilon must lie in (0, 1)");
  if (cfg.X > kMaxSieveBound) throw ConfigError("--X exceeds the sieve bound");
  const DensityReport r =
      cfg.density_N ? union_density(*cfg.density_N, cfg.X, cfg.epsilon) : choose_N(cfg.epsilon, cfg.X);
  emit(cfg, to_json(r));
  text(cfg) << "N = " << r.N << ", X = " << r.X << ": " << r.covered << "/" << r.odd_primes
            << " odd primes, density " << std::fixed << std::setprecision(6) << r.density << " ("
            << (r.achieved ? "> " : "<= ") << 1.0 - r.epsilon << ")\n";
  return r.achieved ? kExitPass : kExitFail;
}

int cmd_pac_check(const RunConfig& cfg) {
  const auto F = field_of_order(need(cfg.q, "--q", "pac-check"));
  if (cfg.f || cfg.k) {
    const CoverageRecord r =
        cfg.k ? check_q_power_coverage(*cfg.k, F) : check_product_coverage(parse_poly(F, *cfg.f), F);
    Json j = to_json(r);
    j = Json{{"version", kReportVersion}, {"kind", "coverage"}, {"record", std::move(j)}};
    emit(cfg, j);
    text(cfg) << r.polynomial << " over " << r.field << ": " << (r.covered ? "covered" : "not covered") << " ("
              << r.missing.size() << " missing of " << r.q << ")\n";
    return r.covered ? kExitPass : kExitFail;
  }
  const QuadraticSweep s = sweep_quadratics(F->order());
  emit(cfg, to_json(s));
  text(cfg) << s.polynomials << " rootless square-free monic quadratics over F_" << s.q << ", "
            << s.failures.size() << " not covered\n";
  for (const auto& f : s.failures) text(cfg) << "  " << format_poly(f) << "\n";
  return s.failures.empty() ? kExitPass : kExitFail;
}

int cmd_counterexample(const RunConfig& cfg) {
  if (cfg.degree < 1) throw ConfigError("--d must be positive");
  if (cfg.q_lo > cfg.q_hi) throw ConfigError("--q-lo exceeds --q-hi");
  const auto hit = find_coverage_counterexample(cfg.degree, cfg.q_lo, cfg.q_hi);
  Json j{{"version", kReportVersion},
         {"kind", "counterexample"},
         {"degree", cfg.degree},
         {"q_lo", cfg.q_lo},
         {"q_hi", cfg.q_hi},
         {"c_bound", c_bound(cfg.degree)}};
  if (hit) {
    j["found"] = true;
    j["q"] = hit->first;
    j["polynomial"] = format_poly(hit->second);
    j["record"] = to_json(check_product_coverage(hit->second, hit->second.field()));
    text(cfg) << "degree " << cfg.degree << ": F_" << hit->first << ", " << format_poly(hit->second)
              << " misses a residue\n";
  } else {
    j["found"] = false;
    text(cfg) << "degree " << cfg.degree << ": every field in [" << cfg.q_lo << ", " << cfg.q_hi
              << "] is covered\n";
  }
  emit(cfg, j);
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Existential definitions of valuation rings: synthesis and verification"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "Write the JSON report here");
    sub->add_flag("--json", cfg.json, "Print the JSON report on stdout, the summary on stderr");
  };
  auto add_field = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q, "Residue field order");
    sub->add_option("--p", cfg.p, "Residue characteristic");
    sub->add_option("--n", cfg.n, "Residue field degree over F_p");
    sub->add_option("--kind", cfg.field_kind, "laurent | padic")->check(CLI::IsMember({"laurent", "padic"}));
  };

  auto* synth = app.add_subcommand("synth", "Print a defining formula as an S-expression");
  synth->add_option("formula", cfg.kind_arg, "phi_f | psi_f | eta_f | finite | psi_k | eta_k | uniformk | uniform")
      ->required();
  synth->add_option("--q", cfg.q, "Field order (finite)");
  synth->add_option("--p", cfg.p, "Characteristic (psi_k, eta_k, uniformk)");
  synth->add_option("--k", cfg.k, "Frobenius power (psi_k, eta_k)");
  synth->add_option("--m", cfg.m, "Excluded degree (uniformk)");
  synth->add_option("--N", cfg.N_formula, "Number of conjuncts bound (uniform)");
  synth->add_option("--f", cfg.f, "Integer polynomial, e.g. X^2+X+1");
  add_common(synth);

  auto* verify = app.add_subcommand("verify", "Check that a formula defines the valuation ring");
  verify->add_option("formula", cfg.kind_arg, "finite | eta_f | eta_k | uniformk | uniform")->required();
  add_field(verify);
  verify->add_option("--k", cfg.k, "Frobenius power (eta_k)");
  verify->add_option("--m", cfg.m, "Excluded degree (uniformk)");
  verify->add_option("--N-formula", cfg.N_formula, "Conjunct bound of the uniform formula (default 7)");
  verify->add_option("--f", cfg.f, "Integer polynomial");
  verify->add_option("--V", cfg.V, "Sample valuations down to -V")->capture_default_str();
  verify->add_option("--N", cfg.precision, "Working precision in digits")->capture_default_str();
  verify->add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();
  verify->add_option("--lead-cap", cfg.lead_cap, "Leading digits sampled away from valuation 0")
      ->capture_default_str();
  verify->add_option("--tails", cfg.tails, "Seeded tails per leading digit")->capture_default_str();
  verify->add_flag("--no-refute", cfg.no_refute, "Skip bounded refutation of negative-valuation samples");
  verify->add_option("--budget", cfg.budget, "Refutation budget in equation evaluations")->capture_default_str();
  verify->add_option("--tail-digits", cfg.tail_digits, "Digits after the leading one in the refutation domain")
      ->capture_default_str();
  verify->add_flag("--serial", cfg.serial, "Disable the OpenMP sweep");
  add_common(verify);

  auto* density = app.add_subcommand("density", "Density of primes where some n <= N is a non-residue");
  density->add_option("--epsilon", cfg.epsilon, "Target: density > 1 - epsilon")->capture_default_str();
  density->add_option("--N", cfg.density_N, "Fixed N instead of the smallest achieving one");
  density->add_option("--X", cfg.X, "Prime bound")->capture_default_str();
  add_common(density);

  auto* pac = app.add_subcommand("pac-check", "Residue coverage of product and Frobenius sets");
  pac->add_option("--q", cfg.q, "Field order")->required();
  pac->add_option("--f", cfg.f, "Polynomial over F_q; all rootless quadratics when omitted");
  pac->add_option("--k", cfg.k, "Check x^(p^k) - x representatives instead");
  add_common(pac);

  auto* cex = app.add_subcommand("counterexample", "Smallest field with an uncovered square-free polynomial");
  cex->add_option("--d", cfg.degree, "Degree")->capture_default_str();
  cex->add_option("--q-lo", cfg.q_lo, "Smallest field order")->capture_default_str();
  cex->add_option("--q-hi", cfg.q_hi, "Largest field order")->capture_default_str();
  add_common(cex);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfig;
  }

  try {
    if (*synth) return cmd_synth(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*density) return cmd_density(cfg);
    if (*pac) return cmd_pac_check(cfg);
    if (*cex) return cmd_counterexample(cfg);
  } catch (const std::exception& e) {
    std::cerr << "hdef: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
