#include <doctest.h>

#include "hdef/report.hpp"
#include "hdef/residue.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hdef;

TEST_CASE("c_bound") {
  CHECK(c_bound(1) == 1);
  CHECK(c_bound(2) == 81);
  CHECK(c_bound(3) == 625);
}

TEST_CASE("q-power coverage") {
  for (auto [p, n] : {std::pair{2u, 1}, {2u, 3}, {3u, 2}, {5u, 1}, {2u, 5}}) {
    const auto F = make_field(p, n);
    const auto rec = check_q_power_coverage(n, F);
    CHECK(rec.covered);
    CHECK(rec.missing.empty());
    CHECK(rec.scan_size == F->order());
  }
  const auto F4 = make_field(2, 2);
  const auto rec = check_q_power_coverage(1, F4);
  CHECK_FALSE(rec.covered);
  REQUIRE(rec.missing.size() == 2);
  for (auto m : rec.missing) CHECK(F4->mul(m, m) != m);
  CHECK(rec.polynomial == "X^2-X");
  CHECK_THROWS(check_q_power_coverage(0, F4));
}

TEST_CASE("product coverage records") {
  const auto F83 = make_field(83, 1);
  const auto rec = check_product_coverage(FqPoly::from_ints(F83, {-2, 0, 1}), F83);
  CHECK(rec.covered);
  CHECK(rec.missing.empty());
  CHECK(rec.scan_size == 83u * 83u);

  const auto F7 = make_field(7, 1);
  const auto bad = check_product_coverage(FqPoly::from_ints(F7, {2, 0, 0, 1}), F7);
  CHECK_FALSE(bad.covered);
  // f(F_7) = {1, 2, 3}, inverses {1, 4, 5}, pairwise products {1, 2, 4, 5, 6}
  std::vector<std::uint32_t> missing;
  for (auto m : bad.missing) missing.push_back(m.code);
  CHECK(missing == std::vector<std::uint32_t>{3});
}

TEST_CASE("rootless square-free monic polynomials") {
  for (std::uint64_t q : {2u, 3u, 4u, 5u, 7u, 9u}) {
    const auto F = field_of_order(q);
    // rootless quadratics are exactly the irreducible ones
    CHECK(rootless_squarefree_monic(2, F).size() == (q * q - q) / 2);
    for (const auto& f : rootless_squarefree_monic(3, F)) {
      CHECK(residue_no_root(f, F));
      CHECK(is_squarefree(f));
      CHECK(f.is_monic());
    }
  }
}

TEST_CASE("no quadratic coverage counterexamples") {
  CHECK_FALSE(find_coverage_counterexample(2, 83, 128).has_value());
  CHECK_FALSE(find_coverage_counterexample(2, 3, 81).has_value());
  CHECK_FALSE(find_coverage_counterexample(2, 10, 5).has_value());
}

TEST_CASE("cubic coverage counterexample") {
  const auto hit = find_coverage_counterexample(3, 2, 64);
  REQUIRE(hit.has_value());
  const auto F = field_of_order(hit->first);
  CHECK_FALSE(product_cover_check(hit->second, F));
  // every smaller field is covered
  for (std::uint32_t q = 2; q < hit->first; ++q) {
    FieldPtr G;
    try {
      G = field_of_order(q);
    } catch (const std::invalid_argument&) {
      continue;
    }
    for (const auto& f : rootless_squarefree_monic(3, G)) CHECK(product_cover_check(f, G));
  }
  Json j{{"q", hit->first}, {"polynomial", format_poly(hit->second)}};
  CHECK(testsupport::check_golden("cubic_counterexample.json", dump(j)));
}

TEST_CASE("quadratic sweep: serial and OpenMP agree") {
  for (std::uint32_t q : {3u, 5u, 7u, 8u, 9u, 11u, 13u, 16u, 25u}) {
    const auto a = sweep_quadratics(q);
    const auto b = serial::sweep_quadratics(q);
    CHECK(a.polynomials == b.polynomials);
    CHECK(a.polynomials == (std::uint64_t{q} * q - q) / 2);
    CHECK(a.failures == b.failures);
    CHECK(a.failures.empty());
  }
}

TEST_CASE("field_of_order") {
  CHECK(field_of_order(128)->degree() == 7);
  CHECK(field_of_order(121)->characteristic() == 11);
  CHECK_THROWS(field_of_order(12));
}
