#include "hdef/report.hpp"

namespace hdef {

namespace {

Json header(const char* kind) {
  Json j;
  j["version"] = kReportVersion;
  j["kind"] = kind;
  return j;
}

Json assignment_json(const Assignment& w, const LocalField& K) {
  Json j = Json::object();
  for (const auto& [name, value] : w) j[name] = K.format(value);
  return j;
}

}  // namespace

Json to_json(const CoverageRecord& r) {
  Json j;
  j["kind"] = r.kind == CoverageRecord::Kind::q_power ? "q_power" : "product";
  j["q"] = r.q;
  j["field"] = r.field;
  j["polynomial"] = r.polynomial;
  if (r.kind == CoverageRecord::Kind::q_power) j["k"] = r.k;
  j["covered"] = r.covered;
  Json missing = Json::array();
  for (auto m : r.missing) missing.push_back(m.code);
  j["missing"] = std::move(missing);
  j["scan_size"] = r.scan_size;
  return j;
}

Json to_json(const SoundnessCert& c) {
  Json j;
  j["f"] = format_int_poly(c.f);
  j["field"] = c.field;
  j["monic"] = c.monic;
  j["no_root_scan"] = c.no_root_scan;
  j["squarefree"] = c.squarefree;
  j["valid"] = c.valid();
  j["conclusions"] = c.conclusions;
  return j;
}

Json to_json(const RefuteRecord& r) {
  Json j;
  j["domain_size"] = r.domain_size;
  j["clauses"] = r.clauses;
  j["nodes"] = r.nodes;
  j["refuted"] = r.refuted;
  j["exhausted"] = r.exhausted;
  j["witness_found"] = r.witness_found;
  return j;
}

Json to_json(const VerifyReport& r) {
  Json j = header("verify");
  j["field"] = r.field;
  j["formula"] = r.formula_id;
  j["window"] = {{"val_lo", r.plan.val_lo}, {"val_hi", r.plan.val_hi}};
  j["precision"] = r.precision;
  j["sampling"] = {{"seed", r.plan.seed}, {"lead_cap", r.plan.lead_cap}, {"tails_per_lead", r.plan.tails_per_lead}};
  j["refutation"] = {{"enabled", r.plan.refute.enabled},
                     {"val_lo", r.plan.refute.val_lo},
                     {"val_hi", r.plan.refute.val_hi},
                     {"tail_digits", r.plan.refute.tail_digits},
                     {"budget", r.plan.refute.budget},
                     {"max_samples", r.plan.refute.max_samples}};
  j["claim"] = to_string(r.claim);
  j["claim_reason"] = r.claim_reason;
  j["responsible"] = r.responsible;
  Json certs = Json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  j["certificates"] = std::move(certs);
  Json cov = Json::array();
  for (const auto& c : r.coverage) cov.push_back(to_json(c));
  j["coverage"] = std::move(cov);
  j["summary"] = {{"samples", r.elements.size()},
                  {"witnesses", r.witnesses},
                  {"rejections", r.rejections},
                  {"failures", r.failures}};
  j["verdict"] = to_string(r.verdict);
  Json elems = Json::array();
  for (const auto& e : r.elements) {
    Json ej;
    ej["x"] = e.x;
    ej["valuation"] = e.valuation >= kInfinitePrecision ? Json(nullptr) : Json(e.valuation);
    ej["in_ring"] = e.in_ring;
    ej["outcome"] = e.outcome;
    ej["residual"] = e.residual ? Json(*e.residual) : Json(nullptr);
    ej["branches"] = e.branches;
    if (!e.error.empty()) ej["error"] = e.error;
    if (e.refutation) ej["refutation"] = to_json(*e.refutation);
    ej["ok"] = e.ok;
    elems.push_back(std::move(ej));
  }
  j["elements"] = std::move(elems);
  j["formula_text"] = r.formula_text;
  return j;
}

Json to_json(const DensityReport& r) {
  Json j = header("density");
  j["N"] = r.N;
  j["X"] = r.X;
  j["odd_primes"] = r.odd_primes;
  j["covered"] = r.covered;
  j["density"] = r.density;
  Json marginal = Json::object();
  for (std::size_t i = 0; i < r.marginal.size(); ++i) marginal[std::to_string(i + 2)] = r.marginal[i];
  j["marginal"] = std::move(marginal);
  j["epsilon"] = r.epsilon;
  j["achieved"] = r.achieved;
  return j;
}

Json to_json(const UniformVerdict& v, const LocalField& K) {
  Json j;
  switch (v.membership) {
    case UniformVerdict::Membership::accepted:
      j["membership"] = "accepted";
      break;
    case UniformVerdict::Membership::rejected:
      j["membership"] = "rejected";
      break;
    case UniformVerdict::Membership::undetermined:
      j["membership"] = "undetermined";
      break;
  }
  j["reason"] = v.reason;
  Json cs = Json::array();
  for (const auto& c : v.conjuncts) cs.push_back({{"n", c.n}, {"square", c.square}, {"cert_valid", c.cert_valid}});
  j["conjuncts"] = std::move(cs);
  if (v.rejecting_conjunct) j["rejecting_conjunct"] = v.rejecting_conjunct;
  if (v.witness) {
    j["witness"] = {{"residual", v.witness->residual},
                    {"branches", v.witness->branches},
                    {"assignment", assignment_json(v.witness->assignment, K)}};
  }
  return j;
}

Json to_json(const QuadraticSweep& s) {
  Json j = header("quadratic-sweep");
  j["q"] = s.q;
  j["polynomials"] = s.polynomials;
  Json fails = Json::array();
  for (const auto& f : s.failures) fails.push_back(format_poly(f));
  j["failures"] = std::move(fails);
  return j;
}

Json synth_json(const std::string& id, const Formula& f) {
  Json j = header("synth");
  j["formula"] = id;
  Json free = Json::array();
  for (const auto& v : free_variables(f)) free.push_back(v);
  j["free_variables"] = std::move(free);
  j["bound_variables"] = bound_variables(f).size();
  j["exists_depth"] = exists_depth(f);
  j["existential_positive"] = is_existential_positive(f);
  j["text"] = print(f);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace hdef
