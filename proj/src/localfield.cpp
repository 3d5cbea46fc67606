#include "hdef/localfield.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "hdef/errors.hpp"

namespace hdef {

const LocalElem& Approx::elem() const {
  if (!elem_) throw PrecisionExhausted("value is O(X^" + std::to_string(bound_) + ")");
  return *elem_;
}

LocalField::LocalField(LocalKind kind, FieldPtr residue, int precision)
    : kind_(kind), residue_(std::move(residue)), precision_(precision) {
  if (precision_ < 1) throw std::invalid_argument("precision must be >= 1");
}

LocalField LocalField::laurent(FieldPtr residue, int precision) {
  return LocalField(LocalKind::laurent, std::move(residue), precision);
}

LocalField LocalField::padic(std::uint32_t p, int precision) {
  return LocalField(LocalKind::padic, make_field(p, 1), precision);
}

LocalField LocalField::with_precision(int precision) const { return LocalField(kind_, residue_, precision); }

std::string LocalField::describe() const {
  if (kind_ == LocalKind::padic) {
    return "Q_" + std::to_string(residue_->characteristic()) + " N=" + std::to_string(precision_);
  }
  return residue_->describe() + " ((t)) N=" + std::to_string(precision_);
}

// ---------------------------------------------------------------------------
// digit kernels

LocalField::Digits LocalField::add_digits(const Digits& a, const Digits& b, int len) const {
  Digits r(len, 0);
  if (kind_ == LocalKind::laurent) {
    for (int i = 0; i < len; ++i) r[i] = residue_->add(FqElem{a[i]}, FqElem{b[i]}).code;
    return r;
  }
  const std::uint32_t p = residue_->characteristic();
  std::uint64_t carry = 0;
  for (int i = 0; i < len; ++i) {
    const std::uint64_t s = std::uint64_t{a[i]} + b[i] + carry;
    r[i] = static_cast<std::uint32_t>(s % p);
    carry = s / p;
  }
  return r;
}

LocalField::Digits LocalField::neg_digits(const Digits& a, int len) const {
  Digits r(len, 0);
  if (kind_ == LocalKind::laurent) {
    for (int i = 0; i < len; ++i) r[i] = residue_->neg(FqElem{a[i]}).code;
    return r;
  }
  const std::uint32_t p = residue_->characteristic();
  int i = 0;
  while (i < len && a[i] == 0) ++i;
  if (i < len) {
    r[i] = p - a[i];
    for (++i; i < len; ++i) r[i] = p - 1 - a[i];
  }
  return r;
}

LocalField::Digits LocalField::mul_digits(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b,
                                          int len) const {
  Digits r(len, 0);
  if (kind_ == LocalKind::laurent) {
    const auto& F = *residue_;
    for (int i = 0; i < len; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; i + j < len; ++j) {
        if (b[j] == 0) continue;
        r[i + j] = F.add(FqElem{r[i + j]}, F.mul(FqElem{a[i]}, FqElem{b[j]})).code;
      }
    }
    return r;
  }
  const std::uint64_t p = residue_->characteristic();
  unsigned __int128 carry = 0;
  for (int k = 0; k < len; ++k) {
    unsigned __int128 s = carry;
    for (int i = 0; i <= k; ++i) s += static_cast<unsigned __int128>(a[i]) * b[k - i];
    r[k] = static_cast<std::uint32_t>(s % p);
    carry = s / p;
  }
  return r;
}

// Unit inverse modulo X^len by long division of 1 by a.
LocalField::Digits LocalField::inv_digits(std::span<const std::uint32_t> a, int len) const {
  Digits w(len, 0);
  if (kind_ == LocalKind::laurent) {
    const auto& F = *residue_;
    const FqElem lead_inv = F.inv(FqElem{a[0]});
    Digits rem(len, 0);
    rem[0] = 1;
    for (int i = 0; i < len; ++i) {
      const FqElem c = F.mul(FqElem{rem[i]}, lead_inv);
      w[i] = c.code;
      if (c.code == 0) continue;
      for (int j = 0; i + j < len; ++j) {
        rem[i + j] = F.sub(FqElem{rem[i + j]}, F.mul(c, FqElem{a[j]})).code;
      }
    }
    return w;
  }
  const std::uint64_t p = residue_->characteristic();
  const std::uint64_t lead_inv = powmod(a[0], p - 2, p);
  // rem holds the running remainder 1 - a*w as p-adic digits.
  Digits rem(len, 0);
  rem[0] = 1;
  for (int i = 0; i < len; ++i) {
    const std::uint64_t c = rem[i] * lead_inv % p;
    w[i] = static_cast<std::uint32_t>(c);
    if (c == 0) continue;
    // rem -= c * a * p^i, with borrows, truncated at len
    std::int64_t borrow = 0;
    for (int j = 0; i + j < len; ++j) {
      std::int64_t d = static_cast<std::int64_t>(rem[i + j]) - static_cast<std::int64_t>(c * a[j] % p) - borrow;
      borrow = static_cast<std::int64_t>(c * a[j] / p);
      while (d < 0) {
        d += static_cast<std::int64_t>(p);
        ++borrow;
      }
      rem[i + j] = static_cast<std::uint32_t>(d);
    }
  }
  return w;
}

LocalElem LocalField::from_digits(int v, Digits d, int prec) const {
  LocalElem e;
  e.zero_ = false;
  e.val_ = v;
  e.prec_ = std::min(prec, precision_);
  d.resize(precision_, 0);
  for (int i = e.prec_; i < precision_; ++i) d[i] = 0;
  e.digits_ = std::move(d);
  return e;
}

Approx LocalField::normalize(int v, const Digits& raw, int len) const {
  int s = 0;
  while (s < len && raw[s] == 0) ++s;
  if (s == len) return Approx::big_oh(v + len);
  Digits d(raw.begin() + s, raw.begin() + len);
  return from_digits(v + s, std::move(d), len - s);
}

// ---------------------------------------------------------------------------
// construction

LocalElem LocalField::from_int(std::int64_t c) const {
  if (c == 0) return zero();
  if (kind_ == LocalKind::laurent) {
    const FqElem r = residue_->from_int(c);
    if (r.code == 0) return zero();
    return from_digits(0, Digits{r.code}, precision_);
  }
  const std::int64_t p = residue_->characteristic();
  int v = 0;
  while (c % p == 0) {
    c /= p;
    ++v;
  }
  const bool negative = c < 0;
  std::uint64_t mag = negative ? 0 - static_cast<std::uint64_t>(c) : static_cast<std::uint64_t>(c);
  Digits d(precision_, 0);
  for (int i = 0; i < precision_ && mag > 0; ++i) {
    d[i] = static_cast<std::uint32_t>(mag % static_cast<std::uint64_t>(p));
    mag /= static_cast<std::uint64_t>(p);
  }
  if (negative) d = neg_digits(d, precision_);
  return from_digits(v, std::move(d), precision_);
}

LocalElem LocalField::monomial(int v, FqElem c) const {
  if (c.code == 0) throw std::invalid_argument("monomial needs a nonzero digit");
  if (c.code >= digit_base()) throw std::invalid_argument("digit out of range");
  return from_digits(v, Digits{c.code}, precision_);
}

LocalElem LocalField::make(int v, std::vector<std::uint32_t> digits, int known_prec) const {
  if (digits.empty() || digits[0] == 0) throw std::invalid_argument("leading digit must be nonzero");
  if (known_prec < 1 || known_prec > precision_) throw std::invalid_argument("known precision out of range");
  if (static_cast<int>(digits.size()) > precision_) throw std::invalid_argument("too many digits");
  for (auto d : digits) {
    if (d >= digit_base()) throw std::invalid_argument("digit out of range");
  }
  return from_digits(v, std::move(digits), known_prec);
}

LocalElem LocalField::lift_residue(FqElem r) const {
  if (r.code == 0) return zero();
  return monomial(0, r);
}

FqElem LocalField::residue(const LocalElem& x) const {
  if (x.is_zero()) return FqElem{0};
  if (x.valuation() < 0) throw std::domain_error("residue of an element of negative valuation");
  if (x.valuation() > 0) return FqElem{0};
  return FqElem{x.digits()[0]};
}

// ---------------------------------------------------------------------------
// arithmetic

Approx LocalField::add(const Approx& x, const Approx& y) const {
  if (x.is_big_oh() && y.is_big_oh()) return Approx::big_oh(std::min(x.bound(), y.bound()));
  if (x.is_big_oh()) return add(y, x);
  const LocalElem& a = x.elem();
  if (y.is_big_oh()) return truncate(x, y.bound());
  const LocalElem& b = y.elem();
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;

  const int v = std::min(a.val_, b.val_);
  const int top = std::min(a.abs_prec(), b.abs_prec());
  const int len = top - v;
  Digits da(len, 0), db(len, 0);
  for (int i = 0; i < a.prec_ && a.val_ - v + i < len; ++i) da[a.val_ - v + i] = a.digits_[i];
  for (int i = 0; i < b.prec_ && b.val_ - v + i < len; ++i) db[b.val_ - v + i] = b.digits_[i];
  return normalize(v, add_digits(da, db, len), len);
}

Approx LocalField::neg(const Approx& x) const {
  if (x.is_big_oh()) return x;
  const LocalElem& a = x.elem();
  if (a.is_zero()) return a;
  Digits d(a.digits_.begin(), a.digits_.begin() + a.prec_);
  return from_digits(a.val_, neg_digits(d, a.prec_), a.prec_);
}

Approx LocalField::sub(const Approx& x, const Approx& y) const { return add(x, neg(y)); }

Approx LocalField::mul(const Approx& x, const Approx& y) const {
  if (!x.is_big_oh() && x.elem().is_zero()) return x;
  if (!y.is_big_oh() && y.elem().is_zero()) return y;
  if (x.is_big_oh() || y.is_big_oh()) return Approx::big_oh(x.bound() + y.bound());
  const LocalElem& a = x.elem();
  const LocalElem& b = y.elem();
  const int prec = std::min(a.prec_, b.prec_);
  return from_digits(a.val_ + b.val_, mul_digits(a.digits_, b.digits_, prec), prec);
}

Approx LocalField::div(const Approx& x, const LocalElem& y) const { return mul(x, inv(y)); }

Approx LocalField::pow(const Approx& x, std::uint64_t e) const {
  Approx result = one();
  Approx base = x;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    e >>= 1;
    if (e > 0) base = mul(base, base);
  }
  return result;
}

Approx LocalField::truncate(const Approx& x, int abs_prec) const {
  if (x.is_big_oh()) return Approx::big_oh(std::min(x.bound(), abs_prec));
  const LocalElem& a = x.elem();
  if (a.valuation() >= abs_prec) return Approx::big_oh(abs_prec);
  if (a.abs_prec() <= abs_prec) return a;
  Digits d(a.digits_.begin(), a.digits_.begin() + (abs_prec - a.val_));
  return from_digits(a.val_, std::move(d), abs_prec - a.val_);
}

LocalElem LocalField::add(const LocalElem& x, const LocalElem& y) const { return add(Approx(x), Approx(y)).elem(); }
LocalElem LocalField::sub(const LocalElem& x, const LocalElem& y) const { return sub(Approx(x), Approx(y)).elem(); }
LocalElem LocalField::neg(const LocalElem& x) const { return neg(Approx(x)).elem(); }
LocalElem LocalField::mul(const LocalElem& x, const LocalElem& y) const { return mul(Approx(x), Approx(y)).elem(); }
LocalElem LocalField::pow(const LocalElem& x, std::uint64_t e) const { return pow(Approx(x), e).elem(); }

LocalElem LocalField::inv(const LocalElem& x) const {
  if (x.is_zero()) throw std::domain_error("inverse of exact zero");
  return from_digits(-x.val_, inv_digits(x.digits_, x.prec_), x.prec_);
}

LocalElem LocalField::div(const LocalElem& x, const LocalElem& y) const { return mul(x, inv(y)); }

Agreement LocalField::agreement(const Approx& x, const Approx& y) const {
  const Approx d = sub(x, y);
  if (d.is_big_oh()) return {d.bound(), false};
  return {d.bound(), true};
}

// ---------------------------------------------------------------------------
// polynomials

LocalPoly LocalField::to_local(const IntPoly& f) const {
  LocalPoly g;
  for (int i = f.degree(); i >= 0; --i) {
    LocalElem c = from_int(f.coeff(i));
    if (!c.is_zero()) g.terms.emplace_back(i, std::move(c));
  }
  return g;
}

LocalPoly LocalField::derivative(const LocalPoly& g) const {
  LocalPoly d;
  for (const auto& [e, c] : g.terms) {
    if (e == 0) continue;
    LocalElem k = from_int(static_cast<std::int64_t>(e));
    if (k.is_zero() || c.is_zero()) continue;
    d.terms.emplace_back(e - 1, mul(k, c));
  }
  return d;
}

Approx LocalField::eval(const LocalPoly& g, const Approx& x) const {
  auto terms = g.terms;
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  if (terms.empty()) return zero();
  Approx acc = terms[0].second;
  for (std::size_t i = 1; i < terms.size(); ++i) {
    acc = add(mul(acc, pow(x, terms[i - 1].first - terms[i].first)), terms[i].second);
  }
  return mul(acc, pow(x, terms.back().first));
}

Approx LocalField::eval_poly_approx(const IntPoly& f, const Approx& x) const {
  if (f.is_zero()) throw std::invalid_argument("evaluation of the zero polynomial");
  Approx acc = from_int(f.coeff(f.degree()));
  for (int i = f.degree() - 1; i >= 0; --i) acc = add(mul(acc, x), from_int(f.coeff(i)));
  return acc;
}

LocalElem LocalField::eval_poly(const IntPoly& f, const LocalElem& x) const {
  return eval_poly_approx(f, x).elem();
}

LocalElem LocalField::hensel_solve(const LocalPoly& g, const LocalElem& a) const {
  const LocalPoly dg = derivative(g);
  if (eval(g, a).bound() < 1) throw HypothesisViolation("hensel: g(a) is not in the maximal ideal");
  const Approx da = eval(dg, a);
  if (da.is_big_oh() || da.elem().is_zero() || da.elem().valuation() != 0) {
    throw HypothesisViolation("hensel: g'(a) is not a unit");
  }

  Approx b = a;
  // Quadratic convergence: log2(N) + slack iterations suffice.
  for (int iter = 0; iter < 64; ++iter) {
    const Approx gb = eval(g, b);
    if (gb.bound() >= precision_) {
      if (b.is_big_oh()) return zero();
      return b.elem();
    }
    const Approx step = div(gb, eval(dg, b).elem());
    b = sub(b, step);
  }
  throw PrecisionExhausted("hensel: Newton iteration did not reach working precision");
}

// ---------------------------------------------------------------------------
// text

namespace {

std::string digit_text(const Field& F, LocalKind kind, std::uint32_t d) {
  if (kind == LocalKind::padic || F.is_prime_field()) return std::to_string(d);
  return F.format(FqElem{d});
}

}  // namespace

std::string LocalField::format(const LocalElem& x) const {
  if (x.is_zero()) return "0";
  const char base = kind_ == LocalKind::laurent ? 't' : 'p';
  std::string out;
  out += base;
  out += "^" + std::to_string(x.valuation()) + "*(";
  for (int i = 0; i < x.known_prec(); ++i) {
    if (i) out += '+';
    out += digit_text(*residue_, kind_, x.digits()[i]);
    if (i >= 1) {
      out += '*';
      out += base;
    }
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out + ")";
}

LocalElem LocalField::parse(std::string_view text) const {
  std::string s;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(text[i]))) {
      s += text[i];
      origin.push_back(i);
    }
  }
  auto where = [&](std::size_t k) { return k < origin.size() ? origin[k] : text.size(); };
  if (s == "0") return zero();
  const char base = kind_ == LocalKind::laurent ? 't' : 'p';
  std::size_t k = 0;
  auto expect = [&](char c) {
    if (k >= s.size() || s[k] != c) throw ParseError(std::string("expected '") + c + "'", where(k));
    ++k;
  };
  auto integer = [&]() {
    const std::size_t start = k;
    if (k < s.size() && s[k] == '-') ++k;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
    if (start == k || (s[start] == '-' && k == start + 1)) throw ParseError("expected integer", where(start));
    return std::stoll(s.substr(start, k - start));
  };
  expect(base);
  expect('^');
  const int v = static_cast<int>(integer());
  expect('*');
  expect('(');
  std::vector<std::uint32_t> digits;
  for (int i = 0;; ++i) {
    if (i) expect('+');
    std::uint32_t d = 0;
    if (k < s.size() && s[k] == '[') {
      const std::size_t close = s.find(']', k);
      if (close == std::string::npos) throw ParseError("unterminated '['", where(k));
      if (kind_ != LocalKind::laurent) throw ParseError("vector digit in p-adic element", where(k));
      d = residue_->parse(s.substr(k, close - k + 1)).code;
      k = close + 1;
    } else {
      const long long raw = integer();
      if (raw < 0 || raw >= static_cast<long long>(digit_base())) throw ParseError("digit out of range", where(k));
      d = static_cast<std::uint32_t>(raw);
    }
    digits.push_back(d);
    if (i >= 1) {
      expect('*');
      expect(base);
      if (i >= 2) {
        expect('^');
        if (integer() != i) throw ParseError("terms must appear in increasing degree", where(k));
      }
    }
    if (k < s.size() && s[k] == ')') break;
  }
  expect(')');
  if (k != s.size()) throw ParseError("trailing characters", where(k));
  const int prec = static_cast<int>(digits.size());
  if (prec > precision_) throw ParseError("more digits than working precision", where(0));
  if (digits[0] == 0) throw ParseError("leading digit must be nonzero", where(0));
  return make(v, std::move(digits), prec);
}

// ---------------------------------------------------------------------------
// enumeration

ElementStream::ElementStream(const LocalField& field, EnumSpec spec) : field_(&field), spec_(std::move(spec)) {
  if (spec_.val_hi < spec_.val_lo) {
    exhaustive_size_ = 1;
  } else {
    if (1 + spec_.tail_digits > field.precision()) {
      throw std::invalid_argument("tail digits exceed working precision");
    }
    const std::uint64_t q = field.digit_base();
    unsigned __int128 count = static_cast<unsigned __int128>(spec_.val_hi - spec_.val_lo + 1) * (q - 1);
    for (int i = 0; i < spec_.tail_digits; ++i) {
      count *= q;
      if (count > (static_cast<unsigned __int128>(1) << 62)) break;
    }
    exhaustive_size_ = static_cast<std::uint64_t>(count) + 1;
  }
  if (spec_.seed) {
    rng_.seed(*spec_.seed);
    size_ = spec_.samples;
  } else {
    if (exhaustive_size_ > spec_.budget) {
      throw SizeGuardExceeded("enumeration of " + std::to_string(exhaustive_size_) +
                              " elements exceeds the budget; use sampling mode");
    }
    size_ = exhaustive_size_;
  }
}

LocalElem ElementStream::element_at(std::uint64_t index) const {
  if (index == 0) return field_->zero();
  index -= 1;
  const std::uint64_t q = field_->digit_base();
  std::vector<std::uint32_t> digits(1 + spec_.tail_digits, 0);
  for (int i = spec_.tail_digits; i >= 1; --i) {
    digits[i] = static_cast<std::uint32_t>(index % q);
    index /= q;
  }
  digits[0] = static_cast<std::uint32_t>(index % (q - 1) + 1);
  index /= (q - 1);
  const int v = spec_.val_lo + static_cast<int>(index);
  return field_->make(v, std::move(digits), field_->precision());
}

std::optional<LocalElem> ElementStream::next() {
  if (cursor_ >= size_) return std::nullopt;
  ++cursor_;
  if (!spec_.seed) return element_at(cursor_ - 1);
  // rng % n keeps the sequence identical across standard libraries.
  return element_at(rng_() % exhaustive_size_);
}

}  // namespace hdef
