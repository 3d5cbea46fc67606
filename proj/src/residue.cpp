#include "hdef/residue.hpp"

#include <algorithm>
#include <stdexcept>

#include "hdef/errors.hpp"
#include "hdef/formula.hpp"

namespace hdef {

namespace {

std::vector<FqElem> missing_products(const FqPoly& g, const Field& F) {
  const std::uint32_t order = F.order() - 1;
  std::vector<char> in_set(order, 0);
  std::vector<std::uint32_t> logs;
  for (std::uint32_t c = 0; c < F.order(); ++c) {
    const FqElem v = g.eval(FqElem{c});
    if (v.code == 0) continue;
    const std::uint32_t l = F.log(v);
    if (!in_set[l]) {
      in_set[l] = 1;
      logs.push_back(l);
    }
  }
  std::vector<FqElem> missing;
  for (std::uint32_t c = 0; c < order; ++c) {
    bool hit = false;
    for (auto a : logs) {
      if (in_set[(c + order - a) % order]) {
        hit = true;
        break;
      }
    }
    if (!hit) missing.push_back(F.exp(c));
  }
  std::sort(missing.begin(), missing.end());
  return missing;
}

FqPoly monic_poly(std::uint64_t code, int d, const FieldPtr& field) {
  std::vector<FqElem> c(d + 1);
  for (int i = 0; i < d; ++i) {
    c[i] = FqElem{static_cast<std::uint32_t>(code % field->order())};
    code /= field->order();
  }
  c[d] = field->one();
  return FqPoly(field, std::move(c));
}

std::uint64_t monic_count(int d, std::uint32_t q) {
  std::uint64_t n = 1;
  for (int i = 0; i < d; ++i) n *= q;
  return n;
}

bool admissible(const FqPoly& f) { return is_squarefree(f) && residue_no_root(f, f.field()); }

}  // namespace

FieldPtr field_of_order(std::uint64_t q) {
  const auto [p, n] = prime_power(q);
  return make_field(p, n);
}

CoverageRecord check_q_power_coverage(int k, const FieldPtr& field) {
  if (k < 1) throw std::invalid_argument("q-power coverage needs k >= 1");
  const auto& F = *field;
  CoverageRecord rec;
  rec.kind = CoverageRecord::Kind::q_power;
  rec.q = F.order();
  rec.field = F.describe();
  rec.k = k;
  std::uint64_t e = 1;
  bool fits = true;
  for (int i = 0; i < k && fits; ++i) {
    if (e > (std::uint64_t{1} << 56)) fits = false;
    e *= F.characteristic();
  }
  rec.polynomial = fits ? "X^" + std::to_string(e) + "-X"
                        : "X^(" + std::to_string(F.characteristic()) + "^" + std::to_string(k) + ")-X";
  for (std::uint32_t c = 0; c < F.order(); ++c) {
    FqElem v{c};
    for (int i = 0; i < k; ++i) v = F.pow(v, F.characteristic());
    if (v.code != c) rec.missing.push_back(FqElem{c});
  }
  rec.scan_size = F.order();
  rec.covered = rec.missing.empty();
  return rec;
}

CoverageRecord check_product_coverage(const FqPoly& f, const FieldPtr& field) {
  if (f.degree() < 1) throw std::invalid_argument("product coverage needs a non-constant polynomial");
  if (field->order() > kProductCoverMaxOrder) throw SizeGuardExceeded("product coverage limited to q <= 2^14");
  CoverageRecord rec;
  rec.kind = CoverageRecord::Kind::product;
  rec.q = field->order();
  rec.field = field->describe();
  rec.polynomial = format_poly(f);
  // Inverses of a cover of F^x cover F^x, so the inverted set f(F)^-1 f(F)^-1
  // misses exactly the inverses of what f(F) f(F) misses.
  for (auto m : missing_products(embed(f, field), *field)) rec.missing.push_back(field->inv(m));
  std::sort(rec.missing.begin(), rec.missing.end());
  rec.scan_size = std::uint64_t{field->order()} * field->order();
  rec.covered = rec.missing.empty();
  return rec;
}

std::int64_t c_bound(int d) {
  if (d < 1) throw std::invalid_argument("c(d) needs d >= 1");
  const std::int64_t b = 2 * static_cast<std::int64_t>(d) - 1;
  return b * b * b * b;
}

std::vector<FqPoly> rootless_squarefree_monic(int d, const FieldPtr& field) {
  if (d < 1) throw std::invalid_argument("degree must be >= 1");
  std::vector<FqPoly> out;
  const std::uint64_t count = monic_count(d, field->order());
  for (std::uint64_t code = 0; code < count; ++code) {
    FqPoly f = monic_poly(code, d, field);
    if (admissible(f)) out.push_back(std::move(f));
  }
  return out;
}

std::optional<std::pair<std::uint32_t, FqPoly>> find_coverage_counterexample(int d, std::uint32_t q_lo,
                                                                             std::uint32_t q_hi) {
  if (q_hi > (1u << 12)) throw SizeGuardExceeded("counterexample search limited to q <= 2^12");
  for (std::uint32_t q = std::max<std::uint32_t>(q_lo, 3); q <= q_hi; ++q) {
    FieldPtr field;
    try {
      field = field_of_order(q);
    } catch (const std::invalid_argument&) {
      continue;
    }
    const std::uint64_t count = monic_count(d, q);
    for (std::uint64_t code = 0; code < count; ++code) {
      FqPoly f = monic_poly(code, d, field);
      if (!admissible(f)) continue;
      if (!missing_products(f, *field).empty()) return std::make_pair(q, std::move(f));
    }
  }
  return std::nullopt;
}

QuadraticSweep sweep_quadratics(std::uint32_t q) {
  const FieldPtr field = field_of_order(q);
  if (q > kProductCoverMaxOrder) throw SizeGuardExceeded("product coverage limited to q <= 2^14");
  const std::int64_t count = static_cast<std::int64_t>(monic_count(2, q));
  // 0 = skipped, 1 = covered, 2 = failed; gathered in code order afterwards
  std::vector<char> status(count, 0);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t code = 0; code < count; ++code) {
    const FqPoly f = monic_poly(static_cast<std::uint64_t>(code), 2, field);
    if (!admissible(f)) continue;
    status[code] = missing_products(f, *field).empty() ? 1 : 2;
  }
  QuadraticSweep out;
  out.q = q;
  for (std::int64_t code = 0; code < count; ++code) {
    if (status[code] == 0) continue;
    ++out.polynomials;
    if (status[code] == 2) out.failures.push_back(monic_poly(static_cast<std::uint64_t>(code), 2, field));
  }
  return out;
}

namespace serial {

QuadraticSweep sweep_quadratics(std::uint32_t q) {
  const FieldPtr field = field_of_order(q);
  QuadraticSweep out;
  out.q = q;
  for (auto& f : rootless_squarefree_monic(2, field)) {
    ++out.polynomials;
    if (!serial::product_cover_check(f, field)) out.failures.push_back(std::move(f));
  }
  return out;
}

}  // namespace serial
}  // namespace hdef
