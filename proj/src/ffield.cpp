#include "hdef/ffield.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "hdef/errors.hpp"
#include "hdef/intpoly.hpp"

namespace hdef {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  unsigned __int128 result = 1 % m;
  unsigned __int128 b = base % m;
  while (e > 0) {
    if (e & 1) result = result * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

namespace {

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Coefficient vector of the code-th monic polynomial of the given degree.
std::vector<std::uint32_t> monic_from_code(std::uint64_t code, std::uint32_t q, int degree) {
  std::vector<std::uint32_t> c(degree + 1, 0);
  for (int i = 0; i < degree; ++i) {
    c[i] = static_cast<std::uint32_t>(code % q);
    code /= q;
  }
  c[degree] = 1;
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// Field

Field::Field(std::uint32_t p, int n, std::vector<std::uint32_t> modulus)
    : p_(p), n_(n), modulus_(std::move(modulus)) {
  std::uint64_t q = 1;
  for (int i = 0; i < n; ++i) q *= p;
  q_ = static_cast<std::uint32_t>(q);
  build_tables();
}

FqElem Field::element(std::uint32_t code) const {
  if (code >= q_) throw std::out_of_range("field element code out of range");
  return {code};
}

FqElem Field::from_int(std::int64_t c) const {
  std::int64_t r = c % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return {static_cast<std::uint32_t>(r)};
}

FqElem Field::from_coords(std::span<const std::uint32_t> coords) const {
  if (static_cast<int>(coords.size()) != n_) {
    throw std::invalid_argument("coordinate vector has wrong length");
  }
  std::uint32_t code = 0;
  for (int i = n_ - 1; i >= 0; --i) {
    if (coords[i] >= p_) throw std::invalid_argument("coordinate out of range");
    code = code * p_ + coords[i];
  }
  return {code};
}

std::vector<std::uint32_t> Field::coords(FqElem a) const {
  std::vector<std::uint32_t> c(n_);
  std::uint32_t v = a.code;
  for (int i = 0; i < n_; ++i) {
    c[i] = v % p_;
    v /= p_;
  }
  return c;
}

FqElem Field::add(FqElem a, FqElem b) const noexcept {
  if (n_ == 1) {
    const std::uint32_t s = a.code + b.code;
    return {s >= p_ ? s - p_ : s};
  }
  if (p_ == 2) return {a.code ^ b.code};
  std::uint32_t x = a.code, y = b.code, out = 0, place = 1;
  while (x != 0 || y != 0) {
    std::uint32_t d = x % p_ + y % p_;
    if (d >= p_) d -= p_;
    out += d * place;
    x /= p_;
    y /= p_;
    place *= p_;
  }
  return {out};
}

FqElem Field::neg(FqElem a) const noexcept {
  if (n_ == 1) return {a.code == 0 ? 0 : p_ - a.code};
  if (p_ == 2) return a;
  std::uint32_t x = a.code, out = 0, place = 1;
  while (x != 0) {
    const std::uint32_t d = x % p_;
    out += (d == 0 ? 0 : p_ - d) * place;
    x /= p_;
    place *= p_;
  }
  return {out};
}

FqElem Field::sub(FqElem a, FqElem b) const noexcept { return add(a, neg(b)); }

FqElem Field::mul(FqElem a, FqElem b) const noexcept {
  if (a.code == 0 || b.code == 0) return {0};
  if (n_ == 1) {
    return {static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.code) * b.code % p_)};
  }
  std::uint32_t k = log_[a.code] + log_[b.code];
  if (k >= q_ - 1) k -= q_ - 1;
  return {exp_[k]};
}

FqElem Field::inv(FqElem a) const {
  if (a.code == 0) throw std::domain_error("inverse of zero in finite field");
  const std::uint32_t k = log_[a.code];
  return {exp_[k == 0 ? 0 : q_ - 1 - k]};
}

FqElem Field::pow(FqElem a, std::uint64_t e) const noexcept {
  if (e == 0) return one();
  if (a.code == 0) return zero();
  const std::uint64_t k = static_cast<std::uint64_t>(log_[a.code]) * (e % (q_ - 1)) % (q_ - 1);
  return {exp_[k]};
}

std::uint32_t Field::log(FqElem a) const {
  if (a.code == 0) throw std::domain_error("log of zero");
  return log_[a.code];
}

FqElem Field::mul_slow(FqElem a, FqElem b) const {
  const auto x = coords(a);
  const auto y = coords(b);
  std::vector<std::uint64_t> prod(2 * n_ - 1, 0);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{x[i]} * y[j]) % p_;
  }
  for (int d = 2 * n_ - 2; d >= n_; --d) {
    const std::uint64_t c = prod[d];
    if (c == 0) continue;
    for (int i = 0; i <= n_; ++i) {
      // subtract c * X^(d-n) * modulus
      prod[d - n_ + i] = (prod[d - n_ + i] + (p_ - c) * modulus_[i]) % p_;
    }
  }
  std::vector<std::uint32_t> out(n_);
  for (int i = 0; i < n_; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
  return from_coords(out);
}

void Field::build_tables() {
  const std::uint32_t order = q_ - 1;
  log_.assign(q_, 0);
  exp_.assign(std::max<std::uint32_t>(order, 1), 1);
  if (q_ == 2) return;

  const auto factors = prime_factors(order);
  auto slow_pow = [&](FqElem g, std::uint64_t e) {
    FqElem r = one();
    while (e > 0) {
      if (e & 1) r = mul_slow(r, g);
      g = mul_slow(g, g);
      e >>= 1;
    }
    return r;
  };
  FqElem gen{0};
  for (std::uint32_t c = 2; c < q_; ++c) {
    const FqElem g{c};
    const bool primitive = std::all_of(factors.begin(), factors.end(), [&](std::uint64_t r) {
      return slow_pow(g, order / r) != one();
    });
    if (primitive) {
      gen = g;
      break;
    }
  }
  FqElem acc = one();
  for (std::uint32_t k = 0; k < order; ++k) {
    exp_[k] = acc.code;
    log_[acc.code] = k;
    acc = mul_slow(acc, gen);
  }
}

std::string Field::format(FqElem a) const {
  const auto c = coords(a);
  if (std::all_of(c.begin() + 1, c.end(), [](std::uint32_t v) { return v == 0; })) return std::to_string(c[0]);
  std::string out = "[";
  for (int i = 0; i < n_; ++i) {
    if (i) out += ',';
    out += std::to_string(c[i]);
  }
  return out + "]";
}

FqElem Field::parse(std::string_view text) const {
  std::string s;
  for (char ch : text) {
    if (ch != ' ') s += ch;
  }
  if (s.empty()) throw ParseError("empty field element", 0);
  if (s.front() != '[') {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw ParseError("trailing characters in field element", used);
    return from_int(v);
  }
  if (s.back() != ']') throw ParseError("expected ']'", s.size());
  std::vector<std::uint32_t> coords;
  std::stringstream ss(s.substr(1, s.size() - 2));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const long long v = std::stoll(item);
    if (v < 0 || v >= static_cast<long long>(p_)) throw ParseError("coordinate out of range", 0);
    coords.push_back(static_cast<std::uint32_t>(v));
  }
  if (static_cast<int>(coords.size()) != n_) throw ParseError("wrong number of coordinates", 0);
  return from_coords(coords);
}

std::string Field::describe() const {
  std::string out = "F_" + std::to_string(p_);
  if (n_ > 1) out += "^" + std::to_string(n_);
  std::vector<std::int64_t> m(modulus_.begin(), modulus_.end());
  return out + " mod " + format_int_poly(IntPoly(m));
}

FieldPtr make_field(std::uint32_t p, int n) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
  if (n < 1) throw std::invalid_argument("extension degree must be >= 1");
  std::uint64_t q = 1;
  for (int i = 0; i < n; ++i) {
    q *= p;
    if (q > Field::kMaxOrder) throw SizeGuardExceeded("field order exceeds 2^20");
  }
  if (n == 1) return FieldPtr(new Field(p, 1, {0, 1}));

  const FieldPtr prime = make_field(p, 1);
  for (std::uint64_t code = 0;; ++code) {
    auto c = monic_from_code(code, p, n);
    std::vector<FqElem> coeffs;
    for (auto v : c) coeffs.push_back({v});
    if (poly_is_irreducible(FqPoly(prime, std::move(coeffs)))) {
      return FieldPtr(new Field(p, n, std::move(c)));
    }
  }
}

// ---------------------------------------------------------------------------
// FqPoly

FqPoly::FqPoly(FieldPtr field) : field_(std::move(field)) {}

FqPoly::FqPoly(FieldPtr field, std::vector<FqElem> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  for (auto c : coeffs_) {
    if (c.code >= field_->order()) throw std::invalid_argument("coefficient not in field");
  }
  trim();
}

FqPoly FqPoly::from_ints(FieldPtr field, const std::vector<std::int64_t>& coeffs) {
  std::vector<FqElem> c;
  c.reserve(coeffs.size());
  for (auto v : coeffs) c.push_back(field->from_int(v));
  return FqPoly(std::move(field), std::move(c));
}

FqPoly FqPoly::monomial(FieldPtr field, FqElem c, int degree) {
  std::vector<FqElem> coeffs(degree + 1, FqElem{0});
  coeffs[degree] = c;
  return FqPoly(std::move(field), std::move(coeffs));
}

void FqPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back().code == 0) coeffs_.pop_back();
}

bool FqPoly::is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == field_->one(); }

FqElem FqPoly::coeff(int i) const noexcept {
  return (i >= 0 && i < static_cast<int>(coeffs_.size())) ? coeffs_[i] : FqElem{0};
}

FqElem FqPoly::eval(FqElem x) const noexcept {
  FqElem acc{0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = field_->add(field_->mul(acc, x), *it);
  }
  return acc;
}

FqPoly FqPoly::derivative() const {
  std::vector<FqElem> d;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    d.push_back(field_->mul(field_->from_int(static_cast<std::int64_t>(i % field_->characteristic())),
                            coeffs_[i]));
  }
  return FqPoly(field_, std::move(d));
}

FqPoly FqPoly::make_monic() const {
  if (is_zero()) return *this;
  const FqElem li = field_->inv(leading());
  std::vector<FqElem> c;
  for (auto v : coeffs_) c.push_back(field_->mul(v, li));
  return FqPoly(field_, std::move(c));
}

namespace {
void require_same_field(const FqPoly& a, const FqPoly& b) {
  if (!a.field()->same_as(*b.field())) throw std::invalid_argument("polynomials over different fields");
}
}  // namespace

FqPoly operator+(const FqPoly& a, const FqPoly& b) {
  require_same_field(a, b);
  const auto& F = *a.field_;
  std::vector<FqElem> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.add(a.coeff(i), b.coeff(i));
  return FqPoly(a.field_, std::move(c));
}

FqPoly operator-(const FqPoly& a, const FqPoly& b) {
  require_same_field(a, b);
  const auto& F = *a.field_;
  std::vector<FqElem> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.sub(a.coeff(i), b.coeff(i));
  return FqPoly(a.field_, std::move(c));
}

FqPoly operator*(const FqPoly& a, const FqPoly& b) {
  require_same_field(a, b);
  if (a.is_zero() || b.is_zero()) return FqPoly(a.field_);
  const auto& F = *a.field_;
  std::vector<FqElem> c(a.coeffs_.size() + b.coeffs_.size() - 1, FqElem{0});
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      c[i + j] = F.add(c[i + j], F.mul(a.coeffs_[i], b.coeffs_[j]));
    }
  }
  return FqPoly(a.field_, std::move(c));
}

bool operator==(const FqPoly& a, const FqPoly& b) {
  return a.field_->same_as(*b.field_) && a.coeffs_ == b.coeffs_;
}

std::pair<FqPoly, FqPoly> divmod(const FqPoly& a, const FqPoly& b) {
  require_same_field(a, b);
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  const auto& F = *a.field();
  std::vector<FqElem> rem = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {FqPoly(a.field()), a};
  std::vector<FqElem> quot(a.degree() - db + 1, FqElem{0});
  const FqElem lead_inv = F.inv(b.leading());
  for (int d = a.degree(); d >= db; --d) {
    const FqElem c = F.mul(rem[d], lead_inv);
    if (c.code == 0) continue;
    quot[d - db] = c;
    for (int i = 0; i <= db; ++i) {
      rem[d - db + i] = F.sub(rem[d - db + i], F.mul(c, b.coeff(i)));
    }
  }
  return {FqPoly(a.field(), std::move(quot)), FqPoly(a.field(), std::move(rem))};
}

FqPoly gcd(const FqPoly& a, const FqPoly& b) {
  FqPoly x = a, y = b;
  while (!y.is_zero()) {
    FqPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.make_monic();
}

FqPoly embed(const FqPoly& f, const FieldPtr& target) {
  if (f.field()->same_as(*target)) return f;
  if (!f.field()->is_prime_field() || f.field()->characteristic() != target->characteristic()) {
    throw std::invalid_argument("can only embed polynomials over the prime subfield");
  }
  std::vector<FqElem> c;
  for (auto v : f.coeffs()) c.push_back(target->from_int(v.code));
  return FqPoly(target, std::move(c));
}

std::string format_poly(const FqPoly& f) {
  if (f.is_zero()) return "0";
  const auto& F = *f.field();
  std::string out;
  for (int i = f.degree(); i >= 0; --i) {
    const FqElem c = f.coeff(i);
    if (c.code == 0) continue;
    if (!out.empty()) out += '+';
    const std::string cs = F.format(c);
    if (i == 0) {
      out += cs;
      continue;
    }
    if (c != F.one()) out += cs + "*";
    out += 'X';
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

FqPoly parse_poly(const FieldPtr& field, std::string_view text) {
  std::vector<FqElem> coeffs;
  for (const auto& term : detail::split_poly_terms(text)) {
    FqElem c = term.coeff.empty() ? field->one() : field->parse(term.coeff);
    if (term.negative) c = field->neg(c);
    if (static_cast<int>(coeffs.size()) <= term.exponent) coeffs.resize(term.exponent + 1, FqElem{0});
    coeffs[term.exponent] = field->add(coeffs[term.exponent], c);
  }
  return FqPoly(field, std::move(coeffs));
}

bool poly_is_irreducible(const FqPoly& f) {
  if (!f.is_monic() || f.degree() < 1) {
    throw std::invalid_argument("irreducibility test needs a monic polynomial of degree >= 1");
  }
  const int deg = f.degree();
  const std::uint64_t q = f.field()->order();
  for (int d = 1; d <= deg / 2; ++d) {
    std::uint64_t count = 1;
    for (int i = 0; i < d; ++i) count *= q;
    for (std::uint64_t code = 0; code < count; ++code) {
      const auto c = monic_from_code(code, static_cast<std::uint32_t>(q), d);
      std::vector<FqElem> coeffs;
      for (auto v : c) coeffs.push_back({v});
      if (divmod(f, FqPoly(f.field(), std::move(coeffs))).second.is_zero()) return false;
    }
  }
  return true;
}

FqPoly find_trace_poly(std::uint32_t p, int m) {
  if (m < 1) throw std::invalid_argument("degree must be >= 1");
  const FieldPtr prime = make_field(p, 1);
  // The scan terminates: such polynomials exist for every p and m.
  for (std::uint64_t code = 0;; ++code) {
    const auto c = monic_from_code(code, p, m);
    std::vector<FqElem> coeffs;
    for (auto v : c) coeffs.push_back({v});
    FqPoly f(prime, std::move(coeffs));
    if (f.derivative().eval(FqElem{0}).code == 0) continue;
    if (poly_is_irreducible(f)) return f;
  }
}

NonrootChoice find_nonroot_poly(const FieldPtr& field) {
  const int n = field->degree();
  int m = 2;
  while (n % m == 0) ++m;
  FqPoly f = find_trace_poly(field->characteristic(), m);
  return NonrootChoice{m, std::move(f), FqElem{0}};
}

bool residue_no_root(const FqPoly& f, const FieldPtr& field) {
  if (f.is_zero()) throw std::invalid_argument("zero polynomial has every root");
  const FqPoly g = embed(f, field);
  for (std::uint32_t c = 0; c < field->order(); ++c) {
    if (g.eval(FqElem{c}).code == 0) return false;
  }
  return true;
}

bool is_squarefree(const FqPoly& f) {
  if (f.degree() < 1) throw std::invalid_argument("square-free test needs a non-constant polynomial");
  const FqPoly d = f.derivative();
  if (d.is_zero()) return false;
  return gcd(f, d).degree() == 0;
}

namespace {

// Discrete logs of the nonzero values of f over the field.
std::vector<std::uint32_t> value_logs(const FqPoly& g, const Field& F) {
  std::vector<char> seen(F.order(), 0);
  for (std::uint32_t c = 0; c < F.order(); ++c) seen[g.eval(FqElem{c}).code] = 1;
  std::vector<std::uint32_t> logs;
  for (std::uint32_t v = 1; v < F.order(); ++v) {
    if (seen[v]) logs.push_back(F.log(FqElem{v}));
  }
  return logs;
}

void guard_cover(const FqPoly& f, const FieldPtr& field) {
  if (f.degree() < 1) throw std::invalid_argument("product cover check needs a non-constant polynomial");
  if (field->order() > kProductCoverMaxOrder) {
    throw SizeGuardExceeded("product cover check limited to q <= 2^14");
  }
}

}  // namespace

bool product_cover_check(const FqPoly& f, const FieldPtr& field) {
  guard_cover(f, field);
  const FqPoly g = embed(f, field);
  const std::uint32_t order = field->order() - 1;
  const auto logs = value_logs(g, *field);
  std::vector<char> in_set(order, 0);
  for (auto l : logs) in_set[l] = 1;

  // Target g^c is covered iff some value log a has (c - a) also a value log.
  int missing = 0;
#pragma omp parallel for schedule(static) reduction(+ : missing)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(order); ++c) {
    bool hit = false;
    for (auto a : logs) {
      const std::uint32_t b = static_cast<std::uint32_t>((c + order - a) % order);
      if (in_set[b]) {
        hit = true;
        break;
      }
    }
    if (!hit) ++missing;
  }
  return missing == 0;
}

namespace serial {

bool product_cover_check(const FqPoly& f, const FieldPtr& field) {
  guard_cover(f, field);
  const FqPoly g = embed(f, field);
  const auto& F = *field;
  std::vector<FqElem> values;
  std::vector<char> seen(F.order(), 0);
  for (std::uint32_t c = 0; c < F.order(); ++c) {
    const FqElem v = g.eval(FqElem{c});
    if (!seen[v.code]) {
      seen[v.code] = 1;
      values.push_back(v);
    }
  }
  std::vector<char> covered(F.order(), 0);
  covered[0] = 1;
  for (auto a : values) {
    for (auto b : values) covered[F.mul(a, b).code] = 1;
  }
  return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

}  // namespace serial

int legendre(std::int64_t n, std::uint64_t p) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("legendre symbol needs an odd prime");
  std::int64_t r = n % static_cast<std::int64_t>(p);
  if (r < 0) r += static_cast<std::int64_t>(p);
  if (r == 0) return 0;
  const std::uint64_t e = powmod(static_cast<std::uint64_t>(r), (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

}  // namespace hdef
