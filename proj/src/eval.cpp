#include "hdef/eval.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "hdef/errors.hpp"
#include "hdef/uniform.hpp"

namespace hdef {

// ---------------------------------------------------------------------------
// FormulaSpec

FormulaSpec FormulaSpec::make_eta_f(IntPoly f) {
  FormulaSpec s;
  s.kind = FormulaKind::eta_f;
  s.f = std::move(f);
  return s;
}

FormulaSpec FormulaSpec::make_finite(std::uint64_t q, std::optional<IntPoly> f) {
  FormulaSpec s;
  s.kind = FormulaKind::finite;
  s.q = q;
  if (f) {
    s.f = std::move(*f);
  } else {
    const auto [p, n] = prime_power(q);
    s.f = lift_poly(find_nonroot_poly(make_field(p, n)).f);
  }
  return s;
}

FormulaSpec FormulaSpec::make_eta_k(std::uint32_t p, int k, IntPoly f) {
  FormulaSpec s;
  s.kind = FormulaKind::eta_k;
  s.p = p;
  s.k = k;
  s.f = std::move(f);
  return s;
}

FormulaSpec FormulaSpec::make_uniformk(std::uint32_t p, int m) {
  FormulaSpec s;
  s.kind = FormulaKind::uniformk;
  s.p = p;
  s.m = m;
  s.f = lift_poly(find_trace_poly(p, m));
  return s;
}

FormulaSpec FormulaSpec::make_uniform(int N) {
  FormulaSpec s;
  s.kind = FormulaKind::uniform;
  s.N = N;
  return s;
}

std::string FormulaSpec::id() const {
  switch (kind) {
    case FormulaKind::eta_f:
      return "eta_f(f=" + format_int_poly(f) + ")";
    case FormulaKind::finite:
      return "finite(q=" + std::to_string(q) + ",f=" + format_int_poly(f) + ")";
    case FormulaKind::eta_k:
      return "eta_k(p=" + std::to_string(p) + ",k=" + std::to_string(k) + ",f=" + format_int_poly(f) + ")";
    case FormulaKind::uniformk:
      return "uniformk(p=" + std::to_string(p) + ",m=" + std::to_string(m) + ")";
    case FormulaKind::uniform:
      return "uniform(N=" + std::to_string(N) + ")";
  }
  return {};
}

Formula FormulaSpec::build() const {
  switch (kind) {
    case FormulaKind::eta_f:
      return eta_f(f);
    case FormulaKind::finite:
      return finite_formula(q, f);
    case FormulaKind::eta_k:
      return eta_k(p, k, f);
    case FormulaKind::uniformk:
      return uniformk_formula(p, m);
    case FormulaKind::uniform:
      return uniform_formula(N);
  }
  throw std::logic_error("unknown formula kind");
}

// ---------------------------------------------------------------------------
// certificates and residuals

SoundnessCert soundness_certificate(const IntPoly& f, const LocalField& K) {
  if (!f.is_monic() || f.degree() < 1) throw std::invalid_argument("soundness certificate needs a monic polynomial");
  SoundnessCert c;
  c.f = f;
  c.field = K.describe();
  c.monic = true;
  const FqPoly fbar = reduce(f, K.residue_field());
  c.no_root_scan = residue_no_root(fbar, K.residue_field());
  c.squarefree = is_squarefree(fbar);
  if (c.valid()) {
    c.conclusions = {"f(K)^-1 in O", "phi_f(K) in O", "psi_f(K) in O", "eta_f(K) in O"};
  }
  return c;
}

namespace {

struct TermEval {
  const LocalField& K;
  const LocalElem& x;
  const std::string& free;
  const Assignment& w;
  std::unordered_map<const void*, Approx> memo;
  bool missing = false;

  Approx operator()(const Term& t) {
    if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
    Approx v;
    switch (t.op()) {
      case TermOp::var:
        if (t.name() == free) {
          v = x;
        } else if (auto it = w.find(t.name()); it != w.end()) {
          v = it->second;
        } else {
          missing = true;
        }
        break;
      case TermOp::constant:
        v = K.from_int(t.value());
        break;
      case TermOp::add:
        v = K.add((*this)(t.lhs()), (*this)(t.rhs()));
        break;
      case TermOp::sub:
        v = K.sub((*this)(t.lhs()), (*this)(t.rhs()));
        break;
      case TermOp::mul:
        v = K.mul((*this)(t.lhs()), (*this)(t.rhs()));
        break;
    }
    memo.emplace(t.id(), v);
    return v;
  }
};

int residual_rec(const Formula& f, const LocalField& K, const LocalElem& x, const std::string& free,
                 const Assignment& w) {
  switch (f.op()) {
    case FormulaOp::equals: {
      TermEval ev{K, x, free, w, {}, false};
      const Approx a = ev(f.lhs());
      const Approx b = ev(f.rhs());
      if (ev.missing) return kUnassignedResidual;
      return std::min(K.agreement(a, b).bound, kInfinitePrecision);
    }
    case FormulaOp::conj: {
      int r = kInfinitePrecision;
      for (const auto& c : f.children()) r = std::min(r, residual_rec(c, K, x, free, w));
      return r;
    }
    case FormulaOp::disj: {
      int r = kUnassignedResidual;
      for (const auto& c : f.children()) r = std::max(r, residual_rec(c, K, x, free, w));
      return r;
    }
    case FormulaOp::exists:
      return residual_rec(f.body(), K, x, free, w);
  }
  return kUnassignedResidual;
}

}  // namespace

int residual(const Formula& f, const LocalField& K, const LocalElem& x, const Assignment& w) {
  const auto free = free_variables(f);
  const std::string name = free.empty() ? "x" : *free.begin();
  return residual_rec(f, K, x, name, w);
}

// ---------------------------------------------------------------------------
// witness pieces

std::optional<FqElem> choose_a(const IntPoly& f, const FieldPtr& residue) {
  const FqPoly d = reduce(f, residue).derivative();
  for (std::uint32_t c = 0; c < residue->order(); ++c) {
    if (d.eval(FqElem{c}).code != 0) return FqElem{c};
  }
  return std::nullopt;
}

PhiWitness witness_u_in_m(const LocalField& K, const IntPoly& f, const LocalElem& a, const LocalElem& u) {
  if (!u.is_zero() && u.valuation() < 1) throw std::invalid_argument("witness_u_in_m needs val(u) >= 1");
  const Approx dfa = K.eval_poly_approx(f.derivative(), a);
  if (dfa.is_big_oh() || dfa.elem().is_zero() || dfa.elem().valuation() != 0) {
    throw HypothesisViolation("f'(a) is not a unit");
  }
  const LocalElem fa = K.eval_poly(f, a);
  PhiWitness w;
  w.z = a;
  w.z1 = K.inv(fa);
  if (u.is_zero()) {
    w.y = a;
    w.y1 = w.z1;
    return w;
  }
  // b solves f(X) = f(a) + x' with x' = (f(a)^-1 + u)^-1 - f(a).
  const LocalElem target = K.inv(K.add(w.z1, u));
  LocalPoly g;
  bool has_constant = false;
  for (const auto& [e, c] : K.to_local(f).terms) {
    if (e != 0) {
      g.terms.emplace_back(e, c);
      continue;
    }
    has_constant = true;
    const Approx d = K.sub(Approx(c), Approx(target));
    if (!d.is_big_oh()) g.terms.emplace_back(0, d.elem());
  }
  if (!has_constant) g.terms.emplace_back(0, K.neg(target));
  w.y = K.hensel_solve(g, a);
  w.y1 = K.inv(K.eval_poly(f, w.y));
  return w;
}

ProductWitnessTable::ProductWitnessTable(const IntPoly& f, const FieldPtr& residue)
    : y_(residue->order(), 0), z_(residue->order(), 0) {
  const Field& F = *residue;
  const FqPoly fbar = reduce(f, residue);
  const std::uint32_t order = F.order() - 1;
  constexpr std::uint32_t kNone = ~std::uint32_t{0};
  std::vector<std::uint32_t> value_log(F.order(), kNone);  // per argument
  std::vector<std::uint32_t> min_arg(order, kNone);         // per value log
  for (std::uint32_t c = 0; c < F.order(); ++c) {
    const FqElem v = fbar.eval(FqElem{c});
    if (v.code == 0) continue;
    const std::uint32_t l = F.log(v);
    value_log[c] = l;
    if (min_arg[l] == kNone) min_arg[l] = c;
  }
  for (std::uint32_t r = 1; r < F.order(); ++r) {
    const std::uint32_t target = (order - F.log(FqElem{r})) % order;
    bool found = false;
    for (std::uint32_t y = 0; y < F.order() && !found; ++y) {
      if (value_log[y] == kNone) continue;
      const std::uint32_t need = (target + order - value_log[y]) % order;
      if (min_arg[need] == kNone) continue;
      y_[r] = y + 1;
      z_[r] = min_arg[need] + 1;
      found = true;
    }
    if (!found) missing_.push_back(FqElem{r});
  }
}

std::optional<std::pair<FqElem, FqElem>> ProductWitnessTable::lookup(FqElem r) const {
  if (r.code == 0 || r.code >= y_.size() || y_[r.code] == 0) return std::nullopt;
  return std::make_pair(FqElem{y_[r.code] - 1}, FqElem{z_[r.code] - 1});
}

PsiWitness witness_t_residue(const LocalField& K, const IntPoly& f, FqElem r, const ProductWitnessTable& table) {
  if (r.code == 0) throw std::invalid_argument("witness_t_residue needs a nonzero residue");
  const auto pair = table.lookup(r);
  if (!pair) {
    throw HypothesisViolation("no residue pair (y, z) with f(y) f(z) = r^-1 for r = " +
                              K.residue_field()->format(r));
  }
  PsiWitness w;
  w.y = K.lift_residue(pair->first);
  w.z = K.lift_residue(pair->second);
  w.y1 = K.inv(K.eval_poly(f, w.y));
  w.z1 = K.inv(K.eval_poly(f, w.z));
  w.t = K.mul(w.y1, w.z1);
  return w;
}

std::optional<LocalElem> integer_sqrt(const LocalField& K, std::int64_t n) {
  const Field& F = *K.residue_field();
  if (F.characteristic() == 2) throw std::invalid_argument("square roots need odd residue characteristic");
  const LocalElem c = K.from_int(n);
  if (c.is_zero()) return K.zero();
  const int v = c.valuation();
  if (v % 2 != 0) return std::nullopt;
  const LocalElem unit = v == 0 ? c : K.mul(c, K.monomial(-v, F.one()));
  const FqElem ubar = K.residue(unit);
  std::optional<FqElem> s;
  for (std::uint32_t r = 1; r < F.order() && !s; ++r) {
    if (F.mul(FqElem{r}, FqElem{r}) == ubar) s = FqElem{r};
  }
  if (!s) return std::nullopt;
  LocalPoly g;
  g.terms.emplace_back(2, K.one());
  g.terms.emplace_back(0, K.neg(unit));
  const LocalElem root = K.hensel_solve(g, K.lift_residue(*s));
  return v == 0 ? root : K.mul(root, K.monomial(v / 2, F.one()));
}

// ---------------------------------------------------------------------------
// WitnessBuilder

namespace {

struct EtaPlan {
  enum class Kind { q_power, product };
  Kind kind = Kind::product;
  std::string prefix;
  std::string branch;
  IntPoly f;
  std::optional<LocalElem> a;
  std::string a_error;
  LocalPoly frob;
  std::shared_ptr<const ProductWitnessTable> table;
};

struct ConjPlan {
  std::int64_t n = 0;
  std::string prefix;
  std::optional<LocalElem> root;
  std::optional<EtaPlan> eta;
};

EtaPlan make_eta_plan(EtaPlan::Kind kind, const std::string& prefix, std::string branch, const IntPoly& f,
                      const LocalField& K, int k = 0) {
  EtaPlan plan;
  plan.kind = kind;
  plan.prefix = prefix;
  plan.branch = std::move(branch);
  plan.f = f;
  if (const auto a = choose_a(f, K.residue_field())) {
    plan.a = K.lift_residue(*a);
  } else {
    plan.a_error = "f-bar' vanishes on the residue field";
  }
  if (kind == EtaPlan::Kind::q_power) {
    std::uint64_t e = 1;
    for (int i = 0; i < k; ++i) {
      e *= K.residue_field()->characteristic();
      if (e > kMaxPowerExponent) throw SizeGuardExceeded("p^k exceeds the term-size budget 2^16");
    }
    plan.frob.terms.emplace_back(e, K.one());
    plan.frob.terms.emplace_back(1, K.neg(K.one()));
  } else {
    plan.table = std::make_shared<const ProductWitnessTable>(f, K.residue_field());
  }
  return plan;
}

void build_eta(const EtaPlan& plan, const LocalField& K, const LocalElem& x, Assignment& w) {
  if (!K.in_ring(x)) throw HypothesisViolation("x is not in the valuation ring");
  if (!plan.a) throw HypothesisViolation(plan.a_error);
  const FqElem xbar = K.residue(x);
  LocalElem t;
  if (xbar.code != 0) {
    if (plan.kind == EtaPlan::Kind::q_power) {
      t = K.hensel_solve(plan.frob, K.lift_residue(xbar));
    } else {
      const PsiWitness pw = witness_t_residue(K, plan.f, xbar, *plan.table);
      const std::string s = plan.prefix + "psi.";
      w[s + "y"] = pw.y;
      w[s + "z"] = pw.z;
      w[s + "y1"] = pw.y1;
      w[s + "z1"] = pw.z1;
      t = pw.t;
    }
  }
  const Approx ua = K.sub(Approx(x), Approx(t));
  const LocalElem u = ua.is_big_oh() ? K.zero() : ua.elem();
  const PhiWitness phi = witness_u_in_m(K, plan.f, *plan.a, u);
  const std::string s = plan.prefix + "phi.";
  w[s + "y"] = phi.y;
  w[s + "z"] = phi.z;
  w[s + "y1"] = phi.y1;
  w[s + "z1"] = phi.z1;
  w[plan.prefix + "u"] = u;
  w[plan.prefix + "t"] = t;
}

}  // namespace

struct WitnessBuilder::Impl {
  FormulaSpec spec;
  LocalField K;
  Formula formula;
  std::vector<EtaPlan> etas;
  std::vector<ConjPlan> conj;
  std::string setup_error;
};

WitnessBuilder::WitnessBuilder(const FormulaSpec& spec, const LocalField& K)
    : impl_(std::make_unique<Impl>(Impl{spec, K, spec.build(), {}, {}, {}})) {
  auto& I = *impl_;
  const Field& F = *K.residue_field();
  switch (spec.kind) {
    case FormulaKind::eta_f:
      I.etas.push_back(make_eta_plan(EtaPlan::Kind::product, "", "eta_f", spec.f, K));
      break;
    case FormulaKind::finite: {
      const int n = prime_power(spec.q).second;
      if (F.order() != spec.q) {
        I.setup_error = "residue field order differs from q";
        break;
      }
      I.etas.push_back(make_eta_plan(EtaPlan::Kind::q_power, "", "finite", spec.f, K, n));
      break;
    }
    case FormulaKind::eta_k:
      if (F.characteristic() != spec.p) {
        I.setup_error = "residue characteristic differs from p";
        break;
      }
      I.etas.push_back(make_eta_plan(EtaPlan::Kind::q_power, "", "eta_k", spec.f, K, spec.k));
      break;
    case FormulaKind::uniformk: {
      const int n = F.degree();
      if (F.characteristic() != spec.p) {
        I.setup_error = "residue characteristic differs from p";
      } else if (n % spec.m == 0) {
        I.setup_error = "m divides the residue degree";
      } else {
        const auto M = build_M(spec.p, spec.m);
        if (std::find(M.begin(), M.end(), n) != M.end()) {
          I.etas.push_back(
              make_eta_plan(EtaPlan::Kind::q_power, eta_k_prefix(n), "k" + std::to_string(n), spec.f, K, n));
        } else {
          I.etas.push_back(make_eta_plan(EtaPlan::Kind::product, kEtaFPrefix, "f", spec.f, K));
        }
      }
      break;
    }
    case FormulaKind::uniform:
      for (int n = 2; n <= spec.N; ++n) {
        ConjPlan c;
        c.n = n;
        c.prefix = phi_n_prefix(n);
        c.root = integer_sqrt(K, n);
        if (!c.root) {
          c.eta = make_eta_plan(EtaPlan::Kind::product, c.prefix, "n" + std::to_string(n) + ":eta",
                                IntPoly({-n, 0, 1}), K);
        }
        I.conj.push_back(std::move(c));
      }
      break;
  }
}

WitnessBuilder::~WitnessBuilder() = default;
WitnessBuilder::WitnessBuilder(WitnessBuilder&&) noexcept = default;

const Formula& WitnessBuilder::formula() const noexcept { return impl_->formula; }

WitnessCert WitnessBuilder::build(const LocalElem& x) const {
  const auto& I = *impl_;
  if (!I.setup_error.empty()) throw HypothesisViolation(I.setup_error);
  WitnessCert cert;
  cert.formula_id = I.spec.id();
  if (I.spec.kind == FormulaKind::uniform) {
    for (const auto& c : I.conj) {
      if (c.root) {
        cert.assignment[c.prefix + "y"] = *c.root;
        cert.branches.push_back("n" + std::to_string(c.n) + ":sqrt");
      } else {
        build_eta(*c.eta, I.K, x, cert.assignment);
        cert.branches.push_back(c.eta->branch);
      }
    }
  } else {
    for (const auto& plan : I.etas) {
      build_eta(plan, I.K, x, cert.assignment);
      cert.branches.push_back(plan.branch);
    }
  }
  cert.residual = residual(I.formula, I.K, x, cert.assignment);
  return cert;
}

WitnessCert construct_witness(const FormulaSpec& spec, const LocalField& K, const LocalElem& x) {
  return WitnessBuilder(spec, K).build(x);
}

// ---------------------------------------------------------------------------
// uniform conjunction

namespace {

void require_odd_prime_residue(const LocalField& K) {
  const Field& F = *K.residue_field();
  if (!F.is_prime_field() || F.characteristic() == 2) {
    throw std::invalid_argument("the uniform formula needs an odd prime residue field");
  }
}

std::vector<ConjunctStatus> conjunct_status(int N, const LocalField& K) {
  require_odd_prime_residue(K);
  std::vector<ConjunctStatus> out;
  for (int n = 2; n <= N; ++n) {
    ConjunctStatus s;
    s.n = n;
    s.square = integer_sqrt(K, n).has_value();
    s.cert_valid = soundness_certificate(IntPoly({-n, 0, 1}), K).valid();
    out.push_back(s);
  }
  return out;
}

}  // namespace

UniformEvaluator::UniformEvaluator(int N, const LocalField& K)
    : N_(N), K_(K), conjuncts_(conjunct_status(N, K)), builder_(FormulaSpec::make_uniform(N), K) {}

UniformVerdict UniformEvaluator::evaluate(const LocalElem& x) const {
  UniformVerdict v;
  v.conjuncts = conjuncts_;
  const bool all_square = std::all_of(conjuncts_.begin(), conjuncts_.end(), [](const auto& c) { return c.square; });
  if (K_.in_ring(x) || all_square) {
    try {
      WitnessCert cert = builder_.build(x);
      if (cert.valid(K_.precision())) {
        v.membership = UniformVerdict::Membership::accepted;
        v.reason = "witness";
      } else {
        v.reason = "witness residual below working precision";
      }
      v.witness = std::move(cert);
    } catch (const std::exception& e) {
      v.reason = e.what();
    }
    return v;
  }
  for (const auto& c : conjuncts_) {
    if (!c.square && c.cert_valid) {
      v.membership = UniformVerdict::Membership::rejected;
      v.rejecting_conjunct = c.n;
      v.reason = "certified by X^2-" + std::to_string(c.n);
      return v;
    }
  }
  v.reason = "no conjunct certifies rejection";
  return v;
}

UniformVerdict eval_uniform(int N, const LocalField& K, const LocalElem& x) {
  return UniformEvaluator(N, K).evaluate(x);
}

// ---------------------------------------------------------------------------
// claims

std::string to_string(Claim c) {
  switch (c) {
    case Claim::defines_valuation_ring:
      return "defines-valuation-ring";
    case Claim::defines_whole_field:
      return "defines-whole-field";
    case Claim::none:
      return "none";
  }
  return {};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "PASS";
    case Verdict::fail:
      return "FAIL";
    case Verdict::expected_partial:
      return "EXPECTED-PARTIAL";
  }
  return {};
}

namespace {

std::optional<CoverageRecord> product_record(const IntPoly& f, const FieldPtr& F) {
  if (F->order() > kProductCoverMaxOrder) return std::nullopt;
  return check_product_coverage(reduce(f, F), F);
}

}  // namespace

ClaimAnalysis analyze_claim(const FormulaSpec& spec, const LocalField& K) {
  ClaimAnalysis A;
  const FieldPtr& F = K.residue_field();
  const std::uint32_t p = F->characteristic();
  const int n = F->degree();
  const std::uint64_t q = F->order();
  const Formula formula = spec.build();
  A.refute_target = formula;

  auto eta_hypotheses = [&](const IntPoly& f) {
    A.certificates.push_back(soundness_certificate(f, K));
    if (!A.certificates.back().valid()) {
      A.reason = "f-bar has a root in the residue field";
      return false;
    }
    if (!choose_a(f, F)) {
      A.reason = "f-bar' vanishes on the residue field";
      return false;
    }
    return true;
  };

  switch (spec.kind) {
    case FormulaKind::finite: {
      A.responsible = {"finite"};
      const int k = prime_power(spec.q).second;
      A.coverage.push_back(check_q_power_coverage(k, F));
      if (q != spec.q) {
        eta_hypotheses(spec.f);
        A.reason = "residue field has order " + std::to_string(q) + ", not " + std::to_string(spec.q);
      } else if (eta_hypotheses(spec.f)) {
        A.claim = Claim::defines_valuation_ring;
        A.reason = "root-free f and q-power representatives of every residue";
      }
      break;
    }
    case FormulaKind::eta_k: {
      A.responsible = {"eta_k"};
      A.coverage.push_back(check_q_power_coverage(spec.k, F));
      const bool hyp = eta_hypotheses(spec.f);
      if (p != spec.p) {
        A.reason = "residue characteristic is not p";
      } else if (!A.coverage.back().covered) {
        A.reason = "[F:F_p] does not divide k";
      } else if (hyp) {
        A.claim = Claim::defines_valuation_ring;
        A.reason = "root-free f and p^k-power representatives of every residue";
      }
      break;
    }
    case FormulaKind::eta_f: {
      A.responsible = {"eta_f"};
      if (auto rec = product_record(spec.f, F)) A.coverage.push_back(std::move(*rec));
      const bool hyp = eta_hypotheses(spec.f);
      const std::int64_t c = c_bound(spec.f.degree());
      if (!hyp) break;
      if (!A.certificates.back().squarefree) {
        A.reason = "f-bar is not square-free";
      } else if (static_cast<std::int64_t>(q) <= c) {
        A.reason = "|F| = " + std::to_string(q) + " is not above c(" + std::to_string(spec.f.degree()) +
                   ") = " + std::to_string(c);
      } else {
        A.claim = Claim::defines_valuation_ring;
        A.reason = "root-free square-free f and |F| > c(deg f)";
      }
      break;
    }
    case FormulaKind::uniformk: {
      A.certificates.push_back(soundness_certificate(spec.f, K));
      if (p != spec.p) {
        A.reason = "residue characteristic is not p";
        break;
      }
      if (n % spec.m == 0) {
        A.reason = "m divides [F:F_p]";
        break;
      }
      const auto M = build_M(spec.p, spec.m);
      if (std::find(M.begin(), M.end(), n) != M.end()) {
        A.responsible = {"k" + std::to_string(n)};
        A.coverage.push_back(check_q_power_coverage(n, F));
      } else {
        A.responsible = {"f"};
        if (auto rec = product_record(spec.f, F)) A.coverage.push_back(std::move(*rec));
      }
      if (!A.certificates.back().valid()) {
        A.reason = "f-bar has a root in the residue field";
      } else if (!choose_a(spec.f, F)) {
        A.reason = "f-bar' vanishes on the residue field";
      } else {
        A.claim = Claim::defines_valuation_ring;
        A.reason = "m does not divide [F:F_p]";
      }
      break;
    }
    case FormulaKind::uniform: {
      require_odd_prime_residue(K);
      std::optional<std::int64_t> active;
      for (int m = 2; m <= spec.N; ++m) {
        const IntPoly fn({-m, 0, 1});
        A.certificates.push_back(soundness_certificate(fn, K));
        if (legendre(m, p) == -1) {
          A.responsible.push_back("n" + std::to_string(m));
          if (auto rec = product_record(fn, F)) A.coverage.push_back(std::move(*rec));
          if (!active) active = m;
        }
      }
      if (active && p > c_bound(2)) {
        A.claim = Claim::defines_valuation_ring;
        A.reason = "p in P_" + std::to_string(*active) + " and p > c(2) = 81";
        A.refute_target = phi_n(*active, "x", phi_n_prefix(*active));
      } else if (!active && p > static_cast<std::uint32_t>(spec.N)) {
        A.claim = Claim::defines_whole_field;
        A.reason = "every n in [2, N] is a square mod p";
      } else if (active) {
        A.reason = "p in P_" + std::to_string(*active) + " but p <= c(2) = 81";
        A.refute_target = phi_n(*active, "x", phi_n_prefix(*active));
      } else {
        A.reason = "p <= N divides some n";
      }
      break;
    }
  }
  if (A.claim == Claim::defines_valuation_ring) {
    A.rejection_certified = std::any_of(A.certificates.begin(), A.certificates.end(),
                                        [](const SoundnessCert& c) { return c.valid(); });
  }
  return A;
}

// ---------------------------------------------------------------------------
// sweeps

std::vector<LocalElem> sample_elements(const LocalField& K, const SamplePlan& plan) {
  const std::uint32_t q = K.digit_base();
  const int N = K.precision();
  std::mt19937_64 rng(plan.seed);
  std::vector<LocalElem> out{K.zero()};
  for (int v = plan.val_lo; v <= plan.val_hi; ++v) {
    std::vector<std::uint32_t> leads;
    if (v == 0 || q - 1 <= plan.lead_cap) {
      for (std::uint32_t c = 1; c < q; ++c) leads.push_back(c);
    } else {
      std::set<std::uint32_t> chosen;
      while (chosen.size() < plan.lead_cap) chosen.insert(static_cast<std::uint32_t>(rng() % (q - 1) + 1));
      leads.assign(chosen.begin(), chosen.end());
    }
    for (auto lead : leads) {
      for (int j = 0; j < plan.tails_per_lead; ++j) {
        std::vector<std::uint32_t> digits(N);
        digits[0] = lead;
        for (int i = 1; i < N; ++i) digits[i] = static_cast<std::uint32_t>(rng() % q);
        out.push_back(K.make(v, std::move(digits), N));
      }
    }
  }
  return out;
}

namespace {

ElementVerdict judge(const LocalElem& x, const LocalField& K, const ClaimAnalysis& A, const WitnessBuilder& builder,
                     const SamplePlan& plan, bool refute) {
  ElementVerdict ev;
  ev.x = K.format(x);
  ev.valuation = x.valuation();
  ev.in_ring = K.in_ring(x);
  if (ev.in_ring || A.claim != Claim::defines_valuation_ring) {
    try {
      const WitnessCert cert = builder.build(x);
      ev.residual = cert.residual;
      ev.branches = cert.branches;
      ev.outcome = cert.valid(K.precision()) ? "witness" : "weak-witness";
    } catch (const std::exception& e) {
      ev.outcome = "no-witness";
      ev.error = e.what();
    }
  } else {
    ev.outcome = A.rejection_certified ? "rejected" : "no-witness";
  }
  if (!ev.in_ring && refute && A.refute_target) {
    try {
      ev.refutation = bounded_refute(*A.refute_target, K, x, plan.refute);
    } catch (const std::exception& e) {
      if (!ev.error.empty()) ev.error += "; ";
      ev.error += std::string("refutation: ") + e.what();
    }
  }
  switch (A.claim) {
    case Claim::defines_valuation_ring:
      ev.ok = ev.in_ring ? ev.outcome == "witness"
                         : ev.outcome == "rejected" && !(ev.refutation && ev.refutation->witness_found);
      break;
    case Claim::defines_whole_field:
      ev.ok = ev.outcome == "witness";
      break;
    case Claim::none:
      ev.ok = true;
      break;
  }
  return ev;
}

}  // namespace

VerifyReport verify_definition(const FormulaSpec& spec, const LocalField& K, const SamplePlan& plan) {
  VerifyReport R;
  R.field = K.describe();
  R.formula_id = spec.id();
  R.precision = K.precision();
  R.plan = plan;
  ClaimAnalysis A = analyze_claim(spec, K);
  const WitnessBuilder builder(spec, K);
  R.formula_text = print(builder.formula());

  const auto samples = sample_elements(K, plan);
  std::vector<char> refute(samples.size(), 0);
  std::size_t selected = 0;
  for (std::size_t i = 0; i < samples.size() && plan.refute.enabled; ++i) {
    if (!K.in_ring(samples[i]) && selected < plan.refute.max_samples) {
      refute[i] = 1;
      ++selected;
    }
  }

  R.elements.resize(samples.size());
  const std::int64_t count = static_cast<std::int64_t>(samples.size());
#pragma omp parallel for schedule(dynamic, 1) if (plan.parallel)
  for (std::int64_t i = 0; i < count; ++i) {
    R.elements[i] = judge(samples[i], K, A, builder, plan, refute[i] != 0);
  }

  for (const auto& ev : R.elements) {
    if (ev.outcome == "witness") ++R.witnesses;
    if (ev.outcome == "rejected") ++R.rejections;
    if (!ev.ok) ++R.failures;
  }
  R.claim = A.claim;
  R.claim_reason = A.reason;
  R.responsible = A.responsible;
  R.certificates = std::move(A.certificates);
  R.coverage = std::move(A.coverage);
  if (R.claim == Claim::none) {
    R.verdict = Verdict::expected_partial;
  } else {
    R.verdict = R.failures == 0 ? Verdict::pass : Verdict::fail;
  }
  return R;
}

namespace serial {

VerifyReport verify_definition(const FormulaSpec& spec, const LocalField& K, SamplePlan plan) {
  plan.parallel = false;
  return hdef::verify_definition(spec, K, plan);
}

}  // namespace serial
}  // namespace hdef
