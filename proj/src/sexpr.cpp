// S-expression form of terms and formulas:
//
//   term    := IDENT | INT | "(" ("add" | "sub" | "mul") term term ")"
//   formula := "(" "=" term term ")"
//            | "(" ("and" | "or") formula+ ")"
//            | "(" "exists" "(" IDENT+ ")" formula ")"

#include <cctype>
#include <charconv>

#include "hdef/errors.hpp"
#include "hdef/formula.hpp"

namespace hdef {

namespace {

void print_term(const Term& t, std::string& out) {
  switch (t.op()) {
    case TermOp::var:
      out += t.name();
      return;
    case TermOp::constant:
      out += std::to_string(t.value());
      return;
    case TermOp::add:
      out += "(add ";
      break;
    case TermOp::sub:
      out += "(sub ";
      break;
    case TermOp::mul:
      out += "(mul ";
      break;
  }
  print_term(t.lhs(), out);
  out += ' ';
  print_term(t.rhs(), out);
  out += ')';
}

void print_formula(const Formula& f, std::string& out) {
  switch (f.op()) {
    case FormulaOp::equals:
      out += "(= ";
      print_term(f.lhs(), out);
      out += ' ';
      print_term(f.rhs(), out);
      out += ')';
      return;
    case FormulaOp::conj:
    case FormulaOp::disj:
      out += f.op() == FormulaOp::conj ? "(and" : "(or";
      for (const auto& c : f.children()) {
        out += ' ';
        print_formula(c, out);
      }
      out += ')';
      return;
    case FormulaOp::exists:
      out += "(exists (";
      for (std::size_t i = 0; i < f.vars().size(); ++i) {
        if (i) out += ' ';
        out += f.vars()[i];
      }
      out += ") ";
      print_formula(f.body(), out);
      out += ')';
      return;
  }
}

struct Token {
  enum Kind { open, close, atom, end } kind;
  std::string_view text;
  std::size_t pos;
};

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) { advance(); }

  Term term() {
    if (tok_.kind == Token::atom) {
      const Token t = tok_;
      advance();
      return atom_term(t);
    }
    expect(Token::open, "'(' or atom");
    const Token head = expect_atom("term operator");
    Term result = Term::constant(0);
    if (head.text == "add" || head.text == "sub" || head.text == "mul") {
      Term a = term();
      Term b = term();
      result = head.text == "add" ? Term::add(std::move(a), std::move(b))
               : head.text == "sub" ? Term::sub(std::move(a), std::move(b))
                                    : Term::mul(std::move(a), std::move(b));
    } else {
      throw ParseError("unknown term operator '" + std::string(head.text) + "'", head.pos);
    }
    expect(Token::close, "')'");
    return result;
  }

  Formula formula() {
    expect(Token::open, "'('");
    const Token head = expect_atom("formula operator");
    if (head.text == "=") {
      Term a = term();
      Term b = term();
      expect(Token::close, "')'");
      return Formula::equals(std::move(a), std::move(b));
    }
    if (head.text == "and" || head.text == "or") {
      std::vector<Formula> children;
      while (tok_.kind == Token::open) children.push_back(formula());
      if (children.empty()) throw ParseError("connective needs at least one operand", tok_.pos);
      expect(Token::close, "')'");
      return head.text == "and" ? Formula::conj(std::move(children)) : Formula::disj(std::move(children));
    }
    if (head.text == "exists") {
      expect(Token::open, "'(' opening the variable list");
      std::vector<std::string> vars;
      while (tok_.kind == Token::atom) {
        const Token v = tok_;
        advance();
        if (!is_identifier(v.text)) throw ParseError("invalid variable name '" + std::string(v.text) + "'", v.pos);
        vars.emplace_back(v.text);
      }
      if (vars.empty()) throw ParseError("empty variable list", tok_.pos);
      expect(Token::close, "')'");
      Formula body = formula();
      expect(Token::close, "')'");
      return Formula::exists(std::move(vars), std::move(body));
    }
    throw ParseError("unknown formula operator '" + std::string(head.text) + "'", head.pos);
  }

  void finish() {
    if (tok_.kind != Token::end) throw ParseError("trailing input", tok_.pos);
  }

 private:
  static bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
    }
    return true;
  }

  static Term atom_term(const Token& t) {
    const std::string_view s = t.text;
    const bool numeric = std::isdigit(static_cast<unsigned char>(s[0])) ||
                         (s[0] == '-' && s.size() > 1 && std::isdigit(static_cast<unsigned char>(s[1])));
    if (numeric) {
      std::int64_t v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("invalid integer '" + std::string(s) + "'", t.pos);
      }
      return Term::constant(v);
    }
    if (!is_identifier(s)) throw ParseError("invalid variable name '" + std::string(s) + "'", t.pos);
    return Term::var(std::string(s));
  }

  void advance() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ == s_.size()) {
      tok_ = {Token::end, {}, i_};
      return;
    }
    if (s_[i_] == '(' || s_[i_] == ')') {
      tok_ = {s_[i_] == '(' ? Token::open : Token::close, s_.substr(i_, 1), i_};
      ++i_;
      return;
    }
    const std::size_t start = i_;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' && s_[i_] != ')') ++i_;
    tok_ = {Token::atom, s_.substr(start, i_ - start), start};
  }

  std::size_t expect(Token::Kind kind, const char* what) {
    if (tok_.kind != kind) throw ParseError(std::string("expected ") + what, tok_.pos);
    const std::size_t pos = tok_.pos;
    advance();
    return pos;
  }

  Token expect_atom(const char* what) {
    if (tok_.kind != Token::atom) throw ParseError(std::string("expected ") + what, tok_.pos);
    const Token t = tok_;
    advance();
    return t;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  Token tok_{Token::end, {}, 0};
};

}  // namespace

std::string print(const Term& t) {
  std::string out;
  print_term(t, out);
  return out;
}

std::string print(const Formula& f) {
  std::string out;
  print_formula(f, out);
  return out;
}

Term parse_term(std::string_view text) {
  Parser p(text);
  Term t = p.term();
  p.finish();
  return t;
}

Formula parse_formula(std::string_view text) {
  Parser p(text);
  Formula f = p.formula();
  p.finish();
  return f;
}

}  // namespace hdef
