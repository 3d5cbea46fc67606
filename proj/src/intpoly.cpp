#include "hdef/intpoly.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

#include "hdef/errors.hpp"

namespace hdef {

IntPoly::IntPoly(std::vector<std::int64_t> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::int64_t IntPoly::coeff(int i) const noexcept {
  return (i >= 0 && i < static_cast<int>(coeffs_.size())) ? coeffs_[i] : 0;
}

IntPoly IntPoly::derivative() const {
  std::vector<std::int64_t> d;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    d.push_back(coeffs_[i] * static_cast<std::int64_t>(i));
  }
  return IntPoly(std::move(d));
}

std::string format_int_poly(const IntPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (int i = f.degree(); i >= 0; --i) {
    const std::int64_t c = f.coeff(i);
    if (c == 0) continue;
    const std::uint64_t mag = c < 0 ? 0 - static_cast<std::uint64_t>(c) : static_cast<std::uint64_t>(c);
    if (c < 0) {
      out += '-';
    } else if (!out.empty()) {
      out += '+';
    }
    if (i == 0) {
      out += std::to_string(mag);
      continue;
    }
    if (mag != 1) out += std::to_string(mag) + "*";
    out += 'X';
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

namespace detail {

std::vector<PolyTerm> split_poly_terms(std::string_view text) {
  std::string s;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(text[i]))) {
      s += text[i];
      origin.push_back(i);
    }
  }
  if (s.empty()) throw ParseError("empty polynomial", 0);
  auto pos_of = [&](std::size_t k) { return k < origin.size() ? origin[k] : text.size(); };

  std::vector<PolyTerm> terms;
  std::size_t k = 0;
  while (k < s.size()) {
    PolyTerm term;
    term.position = pos_of(k);
    if (s[k] == '+' || s[k] == '-') {
      term.negative = s[k] == '-';
      ++k;
    } else if (!terms.empty()) {
      throw ParseError("expected '+' or '-'", pos_of(k));
    }
    if (k >= s.size()) throw ParseError("dangling sign", pos_of(k));

    bool has_coeff = false;
    if (s[k] == '[') {
      const std::size_t close = s.find(']', k);
      if (close == std::string::npos) throw ParseError("unterminated '['", pos_of(k));
      term.coeff = s.substr(k, close - k + 1);
      k = close + 1;
      has_coeff = true;
    } else if (std::isdigit(static_cast<unsigned char>(s[k]))) {
      const std::size_t start = k;
      while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
      term.coeff = s.substr(start, k - start);
      has_coeff = true;
    }

    bool has_x = false;
    if (has_coeff && k < s.size() && s[k] == '*') {
      ++k;
      if (k >= s.size() || s[k] != 'X') throw ParseError("expected 'X' after '*'", pos_of(k));
    }
    if (k < s.size() && s[k] == 'X') {
      has_x = true;
      ++k;
      term.exponent = 1;
      if (k < s.size() && s[k] == '^') {
        ++k;
        const std::size_t start = k;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        if (start == k) throw ParseError("expected exponent", pos_of(k));
        term.exponent = std::stoi(s.substr(start, k - start));
      }
    }
    if (!has_coeff && !has_x) throw ParseError("expected term", pos_of(k));
    terms.push_back(std::move(term));
  }
  return terms;
}

}  // namespace detail

IntPoly parse_int_poly(std::string_view text) {
  std::vector<std::int64_t> coeffs;
  for (const auto& term : detail::split_poly_terms(text)) {
    if (!term.coeff.empty() && term.coeff.front() == '[') {
      throw ParseError("vector coefficient in integer polynomial", term.position);
    }
    std::int64_t c = term.coeff.empty() ? 1 : std::stoll(term.coeff);
    if (term.negative) c = -c;
    if (static_cast<int>(coeffs.size()) <= term.exponent) coeffs.resize(term.exponent + 1, 0);
    coeffs[term.exponent] += c;
  }
  return IntPoly(std::move(coeffs));
}

FqPoly reduce(const IntPoly& f, const FieldPtr& field) {
  return FqPoly::from_ints(field, f.coeffs());
}

}  // namespace hdef
