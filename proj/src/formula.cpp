#include "hdef/formula.hpp"

#include <cctype>
#include <functional>
#include <stdexcept>

#include "hdef/errors.hpp"
#include "hdef/uniform.hpp"

namespace hdef {

struct Term::Node {
  TermOp op;
  std::string name;
  std::int64_t value = 0;
  Term lhs{nullptr};
  Term rhs{nullptr};
};

struct Formula::Node {
  FormulaOp op;
  Term lhs{nullptr};
  Term rhs{nullptr};
  std::vector<Formula> children;
  std::vector<std::string> vars;
};

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  }
  return true;
}

}  // namespace

Term Term::var(std::string name) {
  if (!valid_identifier(name)) throw std::invalid_argument("invalid variable name '" + name + "'");
  return Term(std::make_shared<const Node>(Node{TermOp::var, std::move(name), 0, Term{nullptr}, Term{nullptr}}));
}

Term Term::constant(std::int64_t value) {
  return Term(std::make_shared<const Node>(Node{TermOp::constant, {}, value, Term{nullptr}, Term{nullptr}}));
}

Term Term::add(Term a, Term b) {
  return Term(std::make_shared<const Node>(Node{TermOp::add, {}, 0, std::move(a), std::move(b)}));
}
Term Term::sub(Term a, Term b) {
  return Term(std::make_shared<const Node>(Node{TermOp::sub, {}, 0, std::move(a), std::move(b)}));
}
Term Term::mul(Term a, Term b) {
  return Term(std::make_shared<const Node>(Node{TermOp::mul, {}, 0, std::move(a), std::move(b)}));
}

TermOp Term::op() const noexcept { return node_->op; }
const std::string& Term::name() const { return node_->name; }
std::int64_t Term::value() const { return node_->value; }
const Term& Term::lhs() const { return node_->lhs; }
const Term& Term::rhs() const { return node_->rhs; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case TermOp::var:
      return a.name() == b.name();
    case TermOp::constant:
      return a.value() == b.value();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

Formula Formula::equals(Term lhs, Term rhs) {
  return Formula(std::make_shared<const Node>(Node{FormulaOp::equals, std::move(lhs), std::move(rhs), {}, {}}));
}

Formula Formula::conj(std::vector<Formula> children) {
  if (children.empty()) throw std::invalid_argument("empty conjunction");
  return Formula(std::make_shared<const Node>(Node{FormulaOp::conj, Term{nullptr}, Term{nullptr}, std::move(children), {}}));
}

Formula Formula::disj(std::vector<Formula> children) {
  if (children.empty()) throw std::invalid_argument("empty disjunction");
  return Formula(std::make_shared<const Node>(Node{FormulaOp::disj, Term{nullptr}, Term{nullptr}, std::move(children), {}}));
}

Formula Formula::exists(std::vector<std::string> vars, Formula body) {
  if (vars.empty()) throw std::invalid_argument("existential block without variables");
  for (const auto& v : vars) {
    if (!valid_identifier(v)) throw std::invalid_argument("invalid variable name '" + v + "'");
  }
  return Formula(std::make_shared<const Node>(
      Node{FormulaOp::exists, Term{nullptr}, Term{nullptr}, {std::move(body)}, std::move(vars)}));
}

FormulaOp Formula::op() const noexcept { return node_->op; }
const Term& Formula::lhs() const { return node_->lhs; }
const Term& Formula::rhs() const { return node_->rhs; }
const std::vector<Formula>& Formula::children() const { return node_->children; }
const std::vector<std::string>& Formula::vars() const { return node_->vars; }
const Formula& Formula::body() const { return node_->children.front(); }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  if (a.op() == FormulaOp::equals) return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  return a.vars() == b.vars() && a.children() == b.children();
}

// ---------------------------------------------------------------------------
// structure

namespace {

void term_vars(const Term& t, std::set<std::string>& out) {
  switch (t.op()) {
    case TermOp::var:
      out.insert(t.name());
      return;
    case TermOp::constant:
      return;
    default:
      term_vars(t.lhs(), out);
      if (t.rhs().id() != t.lhs().id()) term_vars(t.rhs(), out);
  }
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (f.op()) {
    case FormulaOp::equals: {
      std::set<std::string> vs;
      term_vars(f.lhs(), vs);
      term_vars(f.rhs(), vs);
      for (const auto& v : vs) {
        if (!bound.count(v)) out.insert(v);
      }
      return;
    }
    case FormulaOp::conj:
    case FormulaOp::disj:
      for (const auto& c : f.children()) collect_free(c, bound, out);
      return;
    case FormulaOp::exists: {
      std::vector<std::string> added;
      for (const auto& v : f.vars()) {
        if (bound.insert(v).second) added.push_back(v);
      }
      collect_free(f.body(), bound, out);
      for (const auto& v : added) bound.erase(v);
      return;
    }
  }
}

bool check_positive(const Formula& f, std::set<std::string>& scope) {
  switch (f.op()) {
    case FormulaOp::equals:
      return true;
    case FormulaOp::conj:
    case FormulaOp::disj:
      if (f.children().empty()) return false;
      for (const auto& c : f.children()) {
        if (!check_positive(c, scope)) return false;
      }
      return true;
    case FormulaOp::exists: {
      if (f.vars().empty()) return false;
      std::vector<std::string> added;
      bool ok = true;
      for (const auto& v : f.vars()) {
        if (!scope.insert(v).second) {
          ok = false;
          break;
        }
        added.push_back(v);
      }
      ok = ok && check_positive(f.body(), scope);
      for (const auto& v : added) scope.erase(v);
      return ok;
    }
  }
  return false;
}

}  // namespace

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

bool is_existential_positive(const Formula& f) {
  std::set<std::string> scope = free_variables(f);
  return check_positive(f, scope);
}

int exists_depth(const Formula& f) {
  switch (f.op()) {
    case FormulaOp::equals:
      return 0;
    case FormulaOp::exists:
      return 1 + exists_depth(f.body());
    default: {
      int d = 0;
      for (const auto& c : f.children()) d = std::max(d, exists_depth(c));
      return d;
    }
  }
}

std::vector<std::string> bound_variables(const Formula& f) {
  std::vector<std::string> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.op() == FormulaOp::equals) return;
    if (g.op() == FormulaOp::exists) out.insert(out.end(), g.vars().begin(), g.vars().end());
    for (const auto& c : g.children()) walk(c);
  };
  walk(f);
  return out;
}

// ---------------------------------------------------------------------------
// constructors

IntPoly lift_poly(const FqPoly& f) {
  if (!f.field()->is_prime_field()) throw std::invalid_argument("lift_poly needs a polynomial over a prime field");
  if (!f.is_monic()) throw std::invalid_argument("lift_poly needs a monic polynomial");
  std::vector<std::int64_t> c;
  for (auto v : f.coeffs()) c.push_back(v.code);
  return IntPoly(std::move(c));
}

Term power_term(const Term& x, std::uint64_t e) {
  if (e == 0) return Term::constant(1);
  if (e == 1) return x;
  if (e % 2 == 0) {
    const Term half = power_term(x, e / 2);
    return Term::mul(half, half);
  }
  return Term::mul(power_term(x, e - 1), x);
}

Term poly_term(const IntPoly& f, const Term& x) {
  if (f.is_zero()) return Term::constant(0);
  auto monomial = [&](std::uint64_t mag, int i) {
    if (i == 0) return Term::constant(static_cast<std::int64_t>(mag));
    const Term xi = power_term(x, static_cast<std::uint64_t>(i));
    return mag == 1 ? xi : Term::mul(Term::constant(static_cast<std::int64_t>(mag)), xi);
  };
  auto magnitude = [](std::int64_t c) {
    return c < 0 ? 0 - static_cast<std::uint64_t>(c) : static_cast<std::uint64_t>(c);
  };
  const int d = f.degree();
  Term acc = f.coeff(d) < 0 ? Term::sub(Term::constant(0), monomial(magnitude(f.coeff(d)), d))
                            : monomial(magnitude(f.coeff(d)), d);
  for (int i = d - 1; i >= 0; --i) {
    const std::int64_t c = f.coeff(i);
    if (c == 0) continue;
    acc = c > 0 ? Term::add(acc, monomial(magnitude(c), i)) : Term::sub(acc, monomial(magnitude(c), i));
  }
  return acc;
}

namespace {

void require_monic(const IntPoly& f) {
  if (!f.is_monic() || f.degree() < 1) throw std::invalid_argument("formula template needs a monic polynomial of degree >= 1");
}

// y1 * f(y) = 1
Formula inverse_value(const IntPoly& f, const std::string& y, const std::string& y1) {
  return Formula::equals(Term::mul(Term::var(y1), poly_term(f, Term::var(y))), Term::constant(1));
}

}  // namespace

Formula phi_f(const IntPoly& f, const std::string& free, const std::string& prefix) {
  require_monic(f);
  const std::string y = prefix + "y", z = prefix + "z", y1 = prefix + "y1", z1 = prefix + "z1";
  return Formula::exists(
      {y, z, y1, z1},
      Formula::conj({Formula::equals(Term::var(free), Term::sub(Term::var(y1), Term::var(z1))),
                     inverse_value(f, y, y1), inverse_value(f, z, z1)}));
}

Formula psi_f(const IntPoly& f, const std::string& free, const std::string& prefix) {
  require_monic(f);
  const std::string y = prefix + "y", z = prefix + "z", y1 = prefix + "y1", z1 = prefix + "z1";
  return Formula::exists(
      {y, z, y1, z1},
      Formula::disj({Formula::equals(Term::var(free), Term::constant(0)),
                     Formula::conj({Formula::equals(Term::var(free), Term::mul(Term::var(y1), Term::var(z1))),
                                    inverse_value(f, y, y1), inverse_value(f, z, z1)})}));
}

Formula eta_f(const IntPoly& f, const std::string& free, const std::string& prefix) {
  const std::string u = prefix + "u", t = prefix + "t";
  return Formula::exists(
      {u, t}, Formula::conj({Formula::equals(Term::var(free), Term::add(Term::var(u), Term::var(t))),
                             phi_f(f, u, prefix + "phi."), psi_f(f, t, prefix + "psi.")}));
}

Formula psi_k(std::uint32_t p, int k, const std::string& free) {
  if (k < 1) throw std::invalid_argument("psi_k needs k >= 1");
  std::uint64_t e = 1;
  for (int i = 0; i < k; ++i) {
    e *= p;
    if (e > kMaxPowerExponent) throw SizeGuardExceeded("p^k exceeds the term-size budget 2^16");
  }
  const Term x = Term::var(free);
  return Formula::equals(Term::sub(power_term(x, e), x), Term::constant(0));
}

Formula eta_k(std::uint32_t p, int k, const IntPoly& f, const std::string& free, const std::string& prefix) {
  const std::string u = prefix + "u", t = prefix + "t";
  return Formula::exists(
      {u, t}, Formula::conj({Formula::equals(Term::var(free), Term::add(Term::var(u), Term::var(t))),
                             phi_f(f, u, prefix + "phi."), psi_k(p, k, t)}));
}

std::pair<std::uint32_t, int> prime_power(std::uint64_t q) {
  if (q < 2) throw std::invalid_argument("not a prime power");
  std::uint64_t p = 2;
  while (q % p != 0) ++p;
  int n = 0;
  std::uint64_t r = q;
  while (r % p == 0) {
    r /= p;
    ++n;
  }
  if (r != 1) throw std::invalid_argument(std::to_string(q) + " is not a prime power");
  return {static_cast<std::uint32_t>(p), n};
}

Formula finite_formula(std::uint64_t q, const IntPoly& f) {
  const auto [p, n] = prime_power(q);
  return eta_k(p, n, f);
}

std::string eta_k_prefix(int k) { return "k" + std::to_string(k) + "."; }
std::string phi_n_prefix(std::int64_t n) { return "n" + std::to_string(n) + "."; }

Formula uniformk_formula(std::uint32_t p, int m) {
  if (m < 2) throw std::invalid_argument("uniformk_formula needs m >= 2");
  const IntPoly f = lift_poly(find_trace_poly(p, m));
  std::vector<Formula> disjuncts{eta_f(f, "x", kEtaFPrefix)};
  for (int k : build_M(p, m)) disjuncts.push_back(eta_k(p, k, f, "x", eta_k_prefix(k)));
  return Formula::disj(std::move(disjuncts));
}

Formula phi_n(std::int64_t n, const std::string& free, const std::string& prefix) {
  if (n < 2) throw std::invalid_argument("phi_n needs n >= 2");
  const std::string y = prefix + "y";
  const Formula square = Formula::exists(
      {y}, Formula::equals(Term::mul(Term::var(y), Term::var(y)), Term::constant(n)));
  return Formula::disj({square, eta_f(IntPoly({-n, 0, 1}), free, prefix)});
}

Formula uniform_formula(int N) {
  if (N < 2) throw std::invalid_argument("uniform_formula needs N >= 2");
  std::vector<Formula> conjuncts;
  for (int n = 2; n <= N; ++n) conjuncts.push_back(phi_n(n, "x", phi_n_prefix(n)));
  return Formula::conj(std::move(conjuncts));
}

}  // namespace hdef
