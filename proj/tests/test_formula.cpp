#include <doctest.h>

#include <numeric>

#include "hdef/errors.hpp"
#include "hdef/formula.hpp"
#include "hdef/refute.hpp"
#include "hdef/residue.hpp"

using namespace hdef;

namespace {

Term v(const char* n) { return Term::var(n); }
Term c(std::int64_t k) { return Term::constant(k); }

std::set<std::uint32_t> codes(const std::vector<FqElem>& xs) {
  std::set<std::uint32_t> s;
  for (auto x : xs) s.insert(x.code);
  return s;
}

}  // namespace

TEST_CASE("phi_f instantiated for X^2+X+1") {
  const IntPoly f({1, 1, 1});
  auto f_of = [](Term y) { return Term::add(Term::add(Term::mul(y, y), y), c(1)); };
  const Formula expect = Formula::exists(
      {"y", "z", "y1", "z1"},
      Formula::conj({Formula::equals(v("x"), Term::sub(v("y1"), v("z1"))),
                     Formula::equals(Term::mul(v("y1"), f_of(v("y"))), c(1)),
                     Formula::equals(Term::mul(v("z1"), f_of(v("z"))), c(1))}));
  CHECK(phi_f(f) == expect);
  CHECK(print(phi_f(f)) ==
        "(exists (y z y1 z1) (and (= x (sub y1 z1)) (= (mul y1 (add (add (mul y y) y) 1)) 1) "
        "(= (mul z1 (add (add (mul z z) z) 1)) 1)))");
  CHECK(free_variables(phi_f(f)) == std::set<std::string>{"x"});
}

TEST_CASE("psi_f instantiated for X^2-2") {
  const Formula g = psi_f(IntPoly({-2, 0, 1}));
  CHECK(print(g) ==
        "(exists (y z y1 z1) (or (= x 0) (and (= x (mul y1 z1)) (= (mul y1 (sub (mul y y) 2)) 1) "
        "(= (mul z1 (sub (mul z z) 2)) 1))))");
  CHECK(free_variables(g) == std::set<std::string>{"x"});
  for (std::uint64_t q : {3u, 5u, 8u}) CHECK(finite_holds(g, field_of_order(q), FqElem{0}));
}

TEST_CASE("eta_f structure") {
  const Formula e = eta_f(IntPoly({-2, 0, 1}));
  CHECK(e.op() == FormulaOp::exists);
  CHECK(e.vars() == std::vector<std::string>{"u", "t"});
  CHECK(exists_depth(e) == 2);
  CHECK(bound_variables(e).size() == 2 + 8);
  CHECK(is_existential_positive(e));
  CHECK(free_variables(e) == std::set<std::string>{"x"});
  CHECK(parse_formula(print(e)) == e);
  const auto bound = bound_variables(e);
  CHECK(std::count(bound.begin(), bound.end(), "phi.y") == 1);
  CHECK(std::count(bound.begin(), bound.end(), "psi.z1") == 1);
}

TEST_CASE("psi_k") {
  CHECK(print(psi_k(2, 1)) == "(= (sub (mul x x) x) 0)");
  CHECK(print(psi_k(3, 1)) == "(= (sub (mul (mul x x) x) x) 0)");
  CHECK(free_variables(psi_k(5, 2)) == std::set<std::string>{"x"});
  CHECK_THROWS_AS(psi_k(2, 17), SizeGuardExceeded);
  CHECK_NOTHROW(psi_k(2, 16));
}

TEST_CASE("roots of psi_k in F_{p^n} form F_{p^gcd(k,n)}") {
  for (std::uint32_t p : {2u, 3u}) {
    for (int n = 1; n <= 4; ++n) {
      const auto F = make_field(p, n);
      for (int k = 1; k <= 4; ++k) {
        const auto roots = finite_defined_set(psi_k(p, k), F);
        std::uint64_t expect = 1;
        for (int i = 0; i < std::gcd(k, n); ++i) expect *= p;
        CHECK(roots.size() == expect);
        for (auto r : roots) CHECK(F->pow(r, expect) == r);
      }
    }
  }
}

TEST_CASE("eta_k and finite formula") {
  const IntPoly f({1, 1, 1});
  const Formula e = eta_k(2, 1, f);
  CHECK(free_variables(e) == std::set<std::string>{"x"});
  CHECK(is_existential_positive(e));
  CHECK(finite_formula(2, f) == e);
  CHECK(finite_formula(8, IntPoly({1, 1, 0, 0, 1})) == eta_k(2, 3, IntPoly({1, 1, 0, 0, 1})));
  CHECK(parse_formula(print(finite_formula(2, f))) == finite_formula(2, f));
  CHECK_THROWS_AS(finite_formula(6, f), std::invalid_argument);
}

TEST_CASE("uniformk formula") {
  const Formula u = uniformk_formula(2, 2);
  REQUIRE(u.op() == FormulaOp::disj);
  CHECK(u.children().size() == 4);
  CHECK(uniformk_formula(3, 2).children().size() == 3);
  CHECK(uniformk_formula(13, 2).children().size() == 2);
  CHECK(u.children()[0] == eta_f(IntPoly({1, 1, 1}), "x", kEtaFPrefix));
  CHECK(u.children()[2] == eta_k(2, 3, IntPoly({1, 1, 1}), "x", eta_k_prefix(3)));
  CHECK(free_variables(u) == std::set<std::string>{"x"});
  CHECK(parse_formula(print(u)) == u);
}

TEST_CASE("phi_n and the uniform conjunction") {
  const Formula p2 = phi_n(2);
  REQUIRE(p2.op() == FormulaOp::disj);
  REQUIRE(p2.children().size() == 2);
  CHECK(print(p2.children()[0]) == "(exists (y) (= (mul y y) 2))");
  CHECK(p2.children()[1] == eta_f(IntPoly({-2, 0, 1})));

  const Formula u3 = uniform_formula(3);
  REQUIRE(u3.op() == FormulaOp::conj);
  CHECK(u3.children().size() == 2);
  CHECK(u3.children()[0] == phi_n(2, "x", phi_n_prefix(2)));
  CHECK(u3.children()[1] == phi_n(3, "x", phi_n_prefix(3)));
  CHECK(uniform_formula(2).op() == FormulaOp::conj);
  CHECK(free_variables(u3) == std::set<std::string>{"x"});
  CHECK(is_existential_positive(u3));
  CHECK(parse_formula(print(uniform_formula(7))) == uniform_formula(7));
  CHECK_THROWS(uniform_formula(1));
}

TEST_CASE("power terms share subterms") {
  const Term x = v("x");
  const Term p8 = power_term(x, 8);
  CHECK(p8.op() == TermOp::mul);
  CHECK(p8.lhs().id() == p8.rhs().id());
  CHECK(print(power_term(x, 1)) == "x");
  CHECK(print(power_term(x, 5)) == "(mul (mul (mul x x) (mul x x)) x)");
  CHECK(print(poly_term(IntPoly({3, 0, -1, 1}), x)) == "(add (sub (mul (mul x x) x) (mul x x)) 3)");
}

TEST_CASE("S-expression parsing") {
  const Formula f = parse_formula("(exists (a b) (or (= a 0) (= (add a -1) (mul b b))))");
  CHECK(free_variables(f).empty());
  CHECK(print(f) == "(exists (a b) (or (= a 0) (= (add a -1) (mul b b))))");
  CHECK(print(parse_term("  (sub  x   7 ) ")) == "(sub x 7)");
  CHECK_THROWS_AS(parse_formula("(= x"), ParseError);
  CHECK_THROWS_AS(parse_formula("(foo x y)"), ParseError);
  CHECK_THROWS_AS(parse_formula("(= x 0) extra"), ParseError);
  CHECK_THROWS_AS(parse_formula("(exists () (= x 0))"), ParseError);
  try {
    parse_formula("(= x (add 1))");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() > 0);
  }
}

TEST_CASE("empty connectives are rejected") {
  CHECK_THROWS(Formula::conj({}));
  CHECK_THROWS(Formula::disj({}));
}

TEST_CASE("psi_f defines the product set in the residue field") {
  for (std::uint64_t q : {3u, 5u, 7u, 8u, 9u}) {
    const auto F = field_of_order(q);
    const auto [p, n] = prime_power(q);
    (void)n;
    for (const auto& f : rootless_squarefree_monic(3, make_field(p, 1))) {
      const auto rec = check_product_coverage(embed(f, F), F);
      const auto defined = codes(finite_defined_set(psi_f(lift_poly(f)), F));
      std::set<std::uint32_t> expect;
      for (std::uint32_t x = 0; x < q; ++x) expect.insert(x);
      for (auto m : rec.missing) expect.erase(m.code);
      CHECK(defined == expect);
    }
  }
}

TEST_CASE("prime_power") {
  CHECK(prime_power(128) == std::pair<std::uint32_t, int>{2, 7});
  CHECK(prime_power(121) == std::pair<std::uint32_t, int>{11, 2});
  CHECK(prime_power(13) == std::pair<std::uint32_t, int>{13, 1});
  CHECK_THROWS(prime_power(12));
  CHECK_THROWS(prime_power(1));
}
