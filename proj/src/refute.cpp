#include "hdef/refute.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "hdef/errors.hpp"

namespace hdef {

namespace {

constexpr std::size_t kMaxClauses = 4096;

// --- compilation to clauses -------------------------------------------------

struct CNode {
  TermOp op;
  int a = -1;
  int b = -1;
  int var = -1;
  std::int64_t c = 0;
};

struct CAtom {
  int lhs = 0;
  int rhs = 0;
  int first = 0;  // nodes [first, last) evaluate this atom
  int last = 0;
  std::vector<int> vars;
};

struct Clause {
  std::vector<int> atoms;
};

struct Compiled {
  std::vector<CNode> nodes;
  std::vector<CAtom> atoms;
  std::vector<std::string> var_names;  // id -> name; id 0 is the free variable
  std::vector<Clause> clauses;
};

class Compiler {
 public:
  explicit Compiler(Compiled& out) : out_(out) {}

  std::vector<Clause> dnf(const Formula& f) {
    switch (f.op()) {
      case FormulaOp::equals:
        return {Clause{{atom(f)}}};
      case FormulaOp::disj: {
        std::vector<Clause> all;
        for (const auto& c : f.children()) {
          auto part = dnf(c);
          all.insert(all.end(), part.begin(), part.end());
          guard(all.size());
        }
        return all;
      }
      case FormulaOp::conj: {
        std::vector<Clause> acc{Clause{}};
        for (const auto& c : f.children()) {
          const auto part = dnf(c);
          guard(acc.size() * part.size());
          std::vector<Clause> next;
          for (const auto& a : acc) {
            for (const auto& b : part) {
              Clause m = a;
              m.atoms.insert(m.atoms.end(), b.atoms.begin(), b.atoms.end());
              next.push_back(std::move(m));
            }
          }
          acc = std::move(next);
        }
        return acc;
      }
      case FormulaOp::exists: {
        for (const auto& v : f.vars()) {
          env_[v].push_back(static_cast<int>(out_.var_names.size()));
          out_.var_names.push_back(v);
        }
        auto body = dnf(f.body());
        for (const auto& v : f.vars()) env_[v].pop_back();
        return body;
      }
    }
    return {};
  }

  void bind_free(const std::string& name) {
    env_[name].push_back(0);
    out_.var_names.push_back(name);
  }

 private:
  static void guard(std::size_t n) {
    if (n > kMaxClauses) throw SizeGuardExceeded("formula expands to too many clauses");
  }

  int atom(const Formula& f) {
    CAtom a;
    a.first = static_cast<int>(out_.nodes.size());
    memo_.clear();
    std::vector<int> vars;
    a.lhs = term(f.lhs(), vars);
    a.rhs = term(f.rhs(), vars);
    a.last = static_cast<int>(out_.nodes.size());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    a.vars = std::move(vars);
    out_.atoms.push_back(std::move(a));
    return static_cast<int>(out_.atoms.size()) - 1;
  }

  int term(const Term& t, std::vector<int>& vars) {
    if (auto it = memo_.find(t.id()); it != memo_.end()) return it->second;
    CNode n{t.op()};
    switch (t.op()) {
      case TermOp::var: {
        auto it = env_.find(t.name());
        if (it == env_.end() || it->second.empty()) {
          throw std::invalid_argument("formula has more than one free variable ('" + t.name() + "')");
        }
        n.var = it->second.back();
        vars.push_back(n.var);
        break;
      }
      case TermOp::constant:
        n.c = t.value();
        break;
      default:
        n.a = term(t.lhs(), vars);
        n.b = term(t.rhs(), vars);
    }
    out_.nodes.push_back(n);
    const int id = static_cast<int>(out_.nodes.size()) - 1;
    memo_.emplace(t.id(), id);
    return id;
  }

  Compiled& out_;
  std::unordered_map<std::string, std::vector<int>> env_;
  std::unordered_map<const void*, int> memo_;
};

Compiled compile(const Formula& f) {
  Compiled c;
  const auto free = free_variables(f);
  if (free.size() > 1) throw std::invalid_argument("formula must have at most one free variable");
  Compiler comp(c);
  comp.bind_free(free.empty() ? std::string("x") : *free.begin());
  c.clauses = comp.dnf(f);
  return c;
}

// --- backends ---------------------------------------------------------------

enum class Status { holds, fails, undetermined };

struct LocalBackend {
  using Value = Approx;
  const LocalField& K;
  int tau;

  Value constant(std::int64_t c) const { return K.from_int(c); }
  Value add(const Value& a, const Value& b) const { return K.add(a, b); }
  Value sub(const Value& a, const Value& b) const { return K.sub(a, b); }
  Value mul(const Value& a, const Value& b) const { return K.mul(a, b); }
  Status check(const Value& a, const Value& b) const {
    const Agreement ag = K.agreement(a, b);
    if (ag.bound >= tau) return Status::holds;
    return ag.exact ? Status::fails : Status::undetermined;
  }
};

struct FiniteBackend {
  using Value = FqElem;
  const Field& F;

  Value constant(std::int64_t c) const { return F.from_int(c); }
  Value add(Value a, Value b) const { return F.add(a, b); }
  Value sub(Value a, Value b) const { return F.sub(a, b); }
  Value mul(Value a, Value b) const { return F.mul(a, b); }
  Status check(Value a, Value b) const { return a == b ? Status::holds : Status::fails; }
};

// --- search -----------------------------------------------------------------

template <class Backend>
class Searcher {
 public:
  using Value = typename Backend::Value;
  using Domain = std::function<Value(std::uint64_t)>;

  Searcher(const Compiled& c, const Backend& backend, Domain domain, std::uint64_t domain_size,
           std::uint64_t budget, bool undetermined_holds)
      : c_(c),
        be_(backend),
        domain_(std::move(domain)),
        domain_size_(domain_size),
        budget_(budget),
        undetermined_holds_(undetermined_holds),
        values_(c.var_names.size()),
        scratch_(c.nodes.size()) {
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
      if (c.nodes[i].op == TermOp::constant) scratch_[i] = be_.constant(c.nodes[i].c);
    }
  }

  enum class Outcome { found, none, exhausted };

  Outcome run(const Value& x) {
    values_[0] = x;
    bool exhausted = false;
    for (std::size_t ci = 0; ci < c_.clauses.size(); ++ci) {
      plan(c_.clauses[ci]);
      const Outcome o = search(0);
      if (o == Outcome::found) return o;
      if (o == Outcome::exhausted) exhausted = true;
      if (nodes_ >= budget_) return Outcome::exhausted;
    }
    return exhausted ? Outcome::exhausted : Outcome::none;
  }

  std::uint64_t nodes() const noexcept { return nodes_; }
  const std::vector<int>& order() const noexcept { return order_; }
  const Value& value(int var) const { return values_[var]; }

 private:
  // Greedy static order: the variable completing the most equations first,
  // then the one occurring in the most equations, then the lowest id.
  void plan(const Clause& cl) {
    std::vector<int> vars;
    for (int a : cl.atoms) {
      for (int v : c_.atoms[a].vars) {
        if (v != 0) vars.push_back(v);
      }
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

    std::vector<char> assigned(c_.var_names.size(), 0);
    assigned[0] = 1;
    auto complete = [&](int a) {
      return std::all_of(c_.atoms[a].vars.begin(), c_.atoms[a].vars.end(), [&](int v) { return assigned[v] != 0; });
    };
    std::vector<char> done(cl.atoms.size(), 0);
    order_.clear();
    checks_.assign(vars.size() + 1, {});
    for (std::size_t i = 0; i < cl.atoms.size(); ++i) {
      if (complete(cl.atoms[i])) {
        done[i] = 1;
        checks_[0].push_back(cl.atoms[i]);
      }
    }
    for (std::size_t depth = 0; depth < vars.size(); ++depth) {
      int best = -1, best_complete = -1, best_occ = -1;
      for (int v : vars) {
        if (assigned[v]) continue;
        assigned[v] = 1;
        int comp = 0, occ = 0;
        for (std::size_t i = 0; i < cl.atoms.size(); ++i) {
          const auto& av = c_.atoms[cl.atoms[i]].vars;
          if (std::find(av.begin(), av.end(), v) != av.end()) ++occ;
          if (!done[i] && complete(cl.atoms[i])) ++comp;
        }
        assigned[v] = 0;
        if (comp > best_complete || (comp == best_complete && occ > best_occ)) {
          best = v;
          best_complete = comp;
          best_occ = occ;
        }
      }
      assigned[best] = 1;
      order_.push_back(best);
      for (std::size_t i = 0; i < cl.atoms.size(); ++i) {
        if (!done[i] && complete(cl.atoms[i])) {
          done[i] = 1;
          checks_[depth + 1].push_back(cl.atoms[i]);
        }
      }
    }
  }

  bool check_level(std::size_t level) {
    for (int a : checks_[level]) {
      ++nodes_;
      const Status s = eval_atom(c_.atoms[a]);
      if (s == Status::fails) return false;
      if (s == Status::undetermined && !undetermined_holds_) return false;
    }
    return true;
  }

  Outcome search(std::size_t depth) {
    if (depth == 0) {
      if (!budget_left(checks_[0].size())) return Outcome::exhausted;
      if (!check_level(0)) return Outcome::none;
    }
    if (depth == order_.size()) return Outcome::found;
    const int v = order_[depth];
    bool exhausted = false;
    for (std::uint64_t i = 0; i < domain_size_; ++i) {
      if (!budget_left(checks_[depth + 1].size())) return Outcome::exhausted;
      values_[v] = domain_(i);
      if (!check_level(depth + 1)) continue;
      const Outcome o = search(depth + 1);
      if (o == Outcome::found) return o;
      if (o == Outcome::exhausted) exhausted = true;
      if (nodes_ >= budget_) return Outcome::exhausted;
    }
    return exhausted ? Outcome::exhausted : Outcome::none;
  }

  bool budget_left(std::size_t need) const { return need == 0 || nodes_ + need <= budget_; }

  Status eval_atom(const CAtom& a) {
    for (int i = a.first; i < a.last; ++i) {
      const CNode& n = c_.nodes[i];
      switch (n.op) {
        case TermOp::var:
          scratch_[i] = values_[n.var];
          break;
        case TermOp::constant:
          break;
        case TermOp::add:
          scratch_[i] = be_.add(scratch_[n.a], scratch_[n.b]);
          break;
        case TermOp::sub:
          scratch_[i] = be_.sub(scratch_[n.a], scratch_[n.b]);
          break;
        case TermOp::mul:
          scratch_[i] = be_.mul(scratch_[n.a], scratch_[n.b]);
          break;
      }
    }
    return be_.check(scratch_[a.lhs], scratch_[a.rhs]);
  }

  const Compiled& c_;
  const Backend& be_;
  Domain domain_;
  std::uint64_t domain_size_;
  std::uint64_t budget_;
  bool undetermined_holds_;
  std::uint64_t nodes_ = 0;
  std::vector<Value> values_;
  std::vector<Value> scratch_;
  std::vector<int> order_;
  std::vector<std::vector<int>> checks_;
};

// x cut to the shape of a domain element: 1 + tail_digits digits, exact.
LocalElem domain_shape(const LocalField& K, const LocalElem& x, int tail_digits) {
  if (x.is_zero()) return x;
  const auto d = x.digits();
  const std::size_t len = std::min<std::size_t>(d.size(), static_cast<std::size_t>(1 + tail_digits));
  return K.make(x.valuation(), std::vector<std::uint32_t>(d.begin(), d.begin() + len), K.precision());
}

struct LocalRun {
  RefuteRecord record;
  std::optional<Assignment> witness;
};

LocalRun run_local(const Formula& f, const LocalField& K, const LocalElem& x, const RefuteConfig& cfg,
                   bool undetermined_holds) {
  LocalRun out;
  const Compiled c = compile(f);
  out.record.clauses = c.clauses.size();
  EnumSpec spec;
  spec.val_lo = cfg.val_lo;
  spec.val_hi = cfg.val_hi;
  spec.tail_digits = cfg.tail_digits;
  spec.seed = 0;  // indexed access only; no budget on the domain itself
  const ElementStream stream = K.enum_elements(spec);
  out.record.domain_size = stream.exhaustive_size();
  if (cfg.budget == 0) {
    out.record.exhausted = true;
    return out;
  }
  // Small domains are materialized once; large ones are generated per index.
  std::vector<Approx> cache;
  constexpr std::uint64_t kCacheLimit = 1 << 16;
  if (stream.exhaustive_size() <= kCacheLimit) {
    for (std::uint64_t i = 0; i < stream.exhaustive_size(); ++i) cache.emplace_back(stream.element_at(i));
  }
  auto domain = [&](std::uint64_t i) -> Approx {
    if (!cache.empty()) return cache[i];
    return stream.element_at(i);
  };
  const LocalBackend be{K, 1 + cfg.tail_digits};
  Searcher<LocalBackend> s(c, be, domain, stream.exhaustive_size(), cfg.budget, undetermined_holds);
  const auto o = s.run(Approx(domain_shape(K, x, cfg.tail_digits)));
  out.record.nodes = s.nodes();
  out.record.exhausted = o == Searcher<LocalBackend>::Outcome::exhausted;
  out.record.witness_found = o == Searcher<LocalBackend>::Outcome::found;
  out.record.refuted = o == Searcher<LocalBackend>::Outcome::none;
  if (out.record.witness_found) {
    Assignment w;
    for (int v : s.order()) {
      const Approx& val = s.value(v);
      w[c.var_names[v]] = val.is_big_oh() ? K.zero() : val.elem();
    }
    out.witness = std::move(w);
  }
  return out;
}

}  // namespace

RefuteRecord bounded_refute(const Formula& f, const LocalField& K, const LocalElem& x, const RefuteConfig& cfg) {
  if (x.valuation() >= 0) throw std::invalid_argument("bounded_refute needs val(x) < 0");
  if (f.op() != FormulaOp::conj) return run_local(f, K, x, cfg, true).record;
  RefuteRecord total;
  bool all_found = true;
  for (const auto& child : f.children()) {
    const RefuteRecord r = run_local(child, K, x, cfg, true).record;
    total.domain_size = r.domain_size;
    total.nodes += r.nodes;
    total.clauses += r.clauses;
    if (r.refuted) {
      total.refuted = true;
      total.exhausted = false;
      total.witness_found = false;
      return total;
    }
    if (!r.witness_found) all_found = false;
  }
  total.witness_found = all_found;
  total.exhausted = !all_found;
  return total;
}

FindResult find_witness(const Formula& f, const LocalField& K, const LocalElem& x, const RefuteConfig& cfg) {
  FindResult out;
  if (f.op() != FormulaOp::conj) {
    auto r = run_local(f, K, x, cfg, false);
    out.record = r.record;
    out.witness = std::move(r.witness);
    return out;
  }
  Assignment merged;
  for (const auto& child : f.children()) {
    auto r = run_local(child, K, x, cfg, false);
    out.record.domain_size = r.record.domain_size;
    out.record.nodes += r.record.nodes;
    out.record.clauses += r.record.clauses;
    if (!r.witness) {
      out.record.exhausted = r.record.exhausted;
      out.record.refuted = r.record.refuted;
      return out;
    }
    merged.insert(r.witness->begin(), r.witness->end());
  }
  out.record.witness_found = true;
  out.witness = std::move(merged);
  return out;
}

bool finite_holds(const Formula& f, const FieldPtr& field, FqElem x) {
  const Compiled c = compile(f);
  const FiniteBackend be{*field};
  auto domain = [](std::uint64_t i) { return FqElem{static_cast<std::uint32_t>(i)}; };
  Searcher<FiniteBackend> s(c, be, domain, field->order(), std::numeric_limits<std::uint64_t>::max(), false);
  return s.run(x) == Searcher<FiniteBackend>::Outcome::found;
}

std::vector<FqElem> finite_defined_set(const Formula& f, const FieldPtr& field) {
  std::vector<FqElem> out;
  for (std::uint32_t c = 0; c < field->order(); ++c) {
    if (finite_holds(f, field, FqElem{c})) out.push_back(FqElem{c});
  }
  return out;
}

}  // namespace hdef
