#include <doctest.h>

#include <random>

#include "hdef/errors.hpp"
#include "hdef/eval.hpp"
#include "hdef/report.hpp"
#include "oracles.hpp"
#include "padic_check.hpp"

using namespace hdef;
using padic_check::eta_holds;
using padic_check::to_int;

namespace {

LocalElem random_integral(const LocalField& K, std::mt19937_64& rng, int val_hi) {
  const std::uint32_t q = K.digit_base();
  std::vector<std::uint32_t> d(K.precision());
  for (auto& c : d) c = static_cast<std::uint32_t>(rng() % q);
  d[0] = 1 + static_cast<std::uint32_t>(rng() % (q - 1));
  return K.make(static_cast<int>(rng() % static_cast<std::uint64_t>(val_hi + 1)), d, K.precision());
}

}  // namespace

TEST_CASE("soundness certificates") {
  const auto F2 = make_field(2, 1);
  const auto K2 = LocalField::laurent(F2);
  const auto c1 = soundness_certificate(IntPoly({1, 1, 1}), K2);
  CHECK(c1.valid());
  CHECK(c1.squarefree);
  CHECK_FALSE(c1.conclusions.empty());

  CHECK(soundness_certificate(IntPoly({-2, 0, 1}), LocalField::padic(5)).valid());
  CHECK_FALSE(soundness_certificate(IntPoly({-2, 0, 1}), LocalField::padic(7)).valid());  // 3^2 = 2
  CHECK_FALSE(soundness_certificate(IntPoly({-1, 0, 1}), LocalField::padic(5)).valid());
  CHECK_THROWS_AS(soundness_certificate(IntPoly({1, 0, 2}), LocalField::padic(5)), std::invalid_argument);
}

TEST_CASE("a valid certificate bounds f(y)^-1 on a window") {
  struct Case {
    LocalField K;
    IntPoly f;
  };
  const Case cases[] = {{LocalField::laurent(make_field(2, 1), 4), IntPoly({1, 1, 1})},
                        {LocalField::padic(5, 4), IntPoly({-2, 0, 1})},
                        {LocalField::laurent(make_field(3, 1), 4), IntPoly({1, 0, 1})}};
  for (const auto& c : cases) {
    REQUIRE(soundness_certificate(c.f, c.K).valid());
    EnumSpec e;
    e.val_lo = -3;
    e.val_hi = 3;
    e.tail_digits = 2;
    auto s = c.K.enum_elements(e);
    while (auto y = s.next()) {
      const LocalElem fy = c.K.eval_poly(c.f, *y);
      CHECK(c.K.inv(fy).valuation() >= 0);
    }
  }
}

TEST_CASE("choose_a") {
  CHECK(choose_a(IntPoly({1, 1, 1}), make_field(2, 1))->code == 0);  // f' = 1
  CHECK(choose_a(IntPoly({-2, 0, 1}), make_field(5, 1))->code == 1);
  CHECK_FALSE(choose_a(IntPoly({1, 0, 1}), make_field(2, 1)).has_value());
}

TEST_CASE("witness for u in the maximal ideal") {
  const auto K = LocalField::laurent(make_field(2, 1));
  const IntPoly f({1, 1, 1});
  const LocalElem a = K.zero();
  const PhiWitness w0 = witness_u_in_m(K, f, a, K.zero());
  CHECK(w0.y == a);
  CHECK(w0.y1 == w0.z1);

  const LocalElem u = K.monomial(1, FqElem{1});
  const PhiWitness w = witness_u_in_m(K, f, a, u);
  Assignment asg{{"y", w.y}, {"z", w.z}, {"y1", w.y1}, {"z1", w.z1}};
  CHECK(residual(phi_f(f), K, u, asg) >= K.precision());
  CHECK(K.sub(w.y, a).valuation() >= 1);
  CHECK_THROWS_AS(witness_u_in_m(K, f, a, K.one()), std::invalid_argument);

  // over Q_5 with f = X^2 - 2 the integer check is independent of the library
  const auto Q5 = LocalField::padic(5, 6);
  const IntPoly g({-2, 0, 1});
  const LocalElem a5 = Q5.lift_residue(*choose_a(g, Q5.residue_field()));
  std::mt19937_64 rng(11);
  const oracle::i128 m = oracle::ipow(5, 6);
  for (int i = 0; i < 50; ++i) {
    LocalElem x = random_integral(Q5, rng, 4);
    if (x.valuation() == 0) x = Q5.mul(x, Q5.from_int(5));
    const PhiWitness pw = witness_u_in_m(Q5, g, a5, x);
    const auto y = to_int(pw.y, 5, 6), z = to_int(pw.z, 5, 6);
    const auto y1 = to_int(pw.y1, 5, 6), z1 = to_int(pw.z1, 5, 6);
    CHECK(oracle::mod(y1 - z1 - to_int(x, 5, 6), m) == 0);
    CHECK(oracle::mod(y1 * (y * y - 2) - 1, m) == 0);
    CHECK(oracle::mod(z1 * (z * z - 2) - 1, m) == 0);
  }
}

TEST_CASE("product witness table picks the first pair") {
  for (std::uint32_t q : {7u, 11u, 13u, 83u}) {
    const auto F = field_of_order(q);
    const IntPoly f({-2, 0, 1});
    const ProductWitnessTable table(f, F);
    for (std::uint32_t r = 1; r < q; ++r) {
      std::optional<std::pair<std::uint32_t, std::uint32_t>> expect;
      for (std::uint32_t y = 0; y < q && !expect; ++y) {
        for (std::uint32_t z = 0; z < q && !expect; ++z) {
          const oracle::i64 fy = oracle::mod(oracle::i128{y} * y - 2, q);
          const oracle::i64 fz = oracle::mod(oracle::i128{z} * z - 2, q);
          if (oracle::mod(oracle::i128{fy} * fz * r, q) == 1) expect = std::pair{y, z};
        }
      }
      const auto got = table.lookup(FqElem{r});
      REQUIRE(got.has_value() == expect.has_value());
      if (got) {
        CHECK(got->first.code == expect->first);
        CHECK(got->second.code == expect->second);
      }
    }
    CHECK_FALSE(table.lookup(FqElem{0}).has_value());
  }
}

TEST_CASE("witness for a nonzero residue") {
  const auto K = LocalField::padic(83, 4);
  const IntPoly f({-2, 0, 1});
  const ProductWitnessTable table(f, K.residue_field());
  REQUIRE(table.covers_all());
  for (std::uint32_t r = 1; r < 83; ++r) {
    const PsiWitness w = witness_t_residue(K, f, FqElem{r}, table);
    CHECK(K.residue(w.t).code == r);
    const auto m = oracle::ipow(83, 4);
    const auto y = to_int(w.y, 83, 4), z = to_int(w.z, 83, 4);
    const auto y1 = to_int(w.y1, 83, 4), z1 = to_int(w.z1, 83, 4);
    CHECK(oracle::mod(y1 * (y * y - 2) - 1, m) == 0);
    CHECK(oracle::mod(z1 * (z * z - 2) - 1, m) == 0);
    CHECK(oracle::mod(y1 * z1 - to_int(w.t, 83, 4), m) == 0);
  }
  CHECK_THROWS_AS(witness_t_residue(K, f, FqElem{0}, table), std::invalid_argument);

  const auto K7 = LocalField::padic(7, 4);
  const IntPoly g({2, 0, 0, 1});
  const ProductWitnessTable gap(g, K7.residue_field());
  REQUIRE(gap.missing().size() == 1);
  CHECK(gap.missing()[0].code == 3);
  CHECK_THROWS_AS(witness_t_residue(K7, g, FqElem{3}, gap), HypothesisViolation);
  CHECK_NOTHROW(witness_t_residue(K7, g, FqElem{2}, gap));
}

TEST_CASE("integer square roots") {
  const auto K = LocalField::padic(7, 6);
  const auto r = integer_sqrt(K, 2);
  REQUIRE(r.has_value());
  CHECK(oracle::mod(to_int(*r, 7, 6) * to_int(*r, 7, 6) - 2, oracle::ipow(7, 6)) == 0);
  CHECK_FALSE(integer_sqrt(K, 3).has_value());
  CHECK_FALSE(integer_sqrt(K, 7).has_value());
  CHECK(integer_sqrt(K, 49).has_value());
  CHECK(integer_sqrt(K, 0)->is_zero());
  CHECK_THROWS(integer_sqrt(LocalField::padic(2), 2));
}

TEST_CASE("constructed witnesses satisfy the formula") {
  SUBCASE("finite, F_3((t))") {
    const auto K = LocalField::laurent(make_field(3, 1));
    const auto spec = FormulaSpec::make_finite(3);
    const WitnessBuilder b(spec, K);
    const auto w0 = b.build(K.zero());
    CHECK(w0.valid(K.precision()));
    CHECK(w0.assignment.at("t").is_zero());
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
      const LocalElem x = random_integral(K, rng, 5);
      const WitnessCert c = b.build(x);
      CHECK(c.valid(K.precision()));
      CHECK(c.residual == residual(b.formula(), K, x, c.assignment));
      CHECK(c.branches == std::vector<std::string>{"finite"});
    }
    CHECK_THROWS_AS(b.build(K.monomial(-1, FqElem{1})), HypothesisViolation);
  }
  SUBCASE("eta_f over Q_83, checked mod 83^N") {
    const auto K = LocalField::padic(83, 5);
    const IntPoly f({-2, 0, 1});
    const WitnessBuilder b(FormulaSpec::make_eta_f(f), K);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
      const LocalElem x = random_integral(K, rng, 4);
      const WitnessCert c = b.build(x);
      CHECK(c.valid(K.precision()));
      CHECK(eta_holds(c.assignment, "", f, to_int(x, 83, 5), 83, 5));
      if (x.valuation() >= 1) CHECK(c.assignment.at("t").is_zero());
    }
  }
  SUBCASE("uniform(7) over Q_83") {
    const auto K = LocalField::padic(83, 5);
    const WitnessBuilder b(FormulaSpec::make_uniform(7), K);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 30; ++i) {
      const LocalElem x = random_integral(K, rng, 4);
      const WitnessCert c = b.build(x);
      CHECK(c.valid(K.precision()));
      CHECK(c.branches.size() == 6);
      for (std::int64_t n = 2; n <= 7; ++n) {
        const std::string pre = phi_n_prefix(n);
        if (oracle::jacobi(n, 83) == 1) {
          const auto y = to_int(c.assignment.at(pre + "y"), 83, 5);
          CHECK(oracle::mod(y * y - n, oracle::ipow(83, 5)) == 0);
        } else {
          CHECK(eta_holds(c.assignment, pre, IntPoly({-n, 0, 1}), to_int(x, 83, 5), 83, 5));
        }
      }
    }
  }
  SUBCASE("mismatched residue field") {
    const auto K = LocalField::laurent(make_field(2, 2));
    CHECK_THROWS_AS(construct_witness(FormulaSpec::make_finite(2), K, K.one()), HypothesisViolation);
    CHECK_THROWS_AS(construct_witness(FormulaSpec::make_uniformk(2, 2), K, K.one()), HypothesisViolation);
  }
}

TEST_CASE("search and construction agree on a tiny field") {
  const auto K = LocalField::laurent(make_field(2, 1), 2);
  const auto spec = FormulaSpec::make_finite(2);
  const Formula f = spec.build();
  RefuteConfig cfg;
  cfg.val_lo = -1;
  cfg.val_hi = 1;
  cfg.tail_digits = 1;
  cfg.budget = 50'000'000;
  EnumSpec e;
  e.val_lo = -1;
  e.val_hi = 1;
  e.tail_digits = 1;
  auto s = K.enum_elements(e);
  int found = 0;
  while (auto x = s.next()) {
    const FindResult r = find_witness(f, K, *x, cfg);
    CHECK_FALSE(r.record.exhausted);
    if (K.in_ring(*x)) {
      CHECK(r.witness.has_value());
      CHECK(construct_witness(spec, K, *x).valid(K.precision()));
      ++found;
    } else {
      CHECK_FALSE(r.witness.has_value());
    }
  }
  CHECK(found == 5);
}

TEST_CASE("bounded refutation") {
  const auto K = LocalField::laurent(make_field(2, 1));
  const Formula f = FormulaSpec::make_finite(2).build();
  RefuteConfig cfg;
  cfg.budget = 2000;
  const RefuteRecord r = bounded_refute(f, K, K.monomial(-1, FqElem{1}), cfg);
  CHECK_FALSE(r.witness_found);
  CHECK(r.nodes <= 2000 + 64);
  CHECK(r.domain_size > 0);
  CHECK_THROWS_AS(bounded_refute(f, K, K.one(), cfg), std::invalid_argument);
  CHECK_THROWS_AS(bounded_refute(f, K, K.zero(), cfg), std::invalid_argument);

  cfg.budget = 0;
  const RefuteRecord z = bounded_refute(f, K, K.monomial(-1, FqElem{1}), cfg);
  CHECK(z.nodes == 0);
  CHECK_FALSE(z.witness_found);
  CHECK_FALSE(z.refuted);
}

TEST_CASE("verify_definition verdicts") {
  SamplePlan plan;
  plan.val_lo = -2;
  plan.val_hi = 3;
  plan.refute.budget = 2000;
  plan.refute.max_samples = 4;

  const auto K = LocalField::laurent(make_field(2, 1), 6);
  const VerifyReport r = verify_definition(FormulaSpec::make_finite(2), K, plan);
  CHECK(r.claim == Claim::defines_valuation_ring);
  CHECK(r.verdict == Verdict::pass);
  CHECK(r.failures == 0);
  CHECK(r.elements.size() == 1 + 6);
  CHECK(r.witnesses == 5);  // zero and valuations 0..3
  CHECK(r.rejections == 2);

  const VerifyReport q5 = verify_definition(FormulaSpec::make_eta_f(IntPoly({-2, 0, 1})), LocalField::padic(5, 4), plan);
  CHECK(q5.claim == Claim::none);
  CHECK(q5.verdict == Verdict::expected_partial);

  const VerifyReport q7 = verify_definition(FormulaSpec::make_eta_f(IntPoly({-2, 0, 1})), LocalField::padic(7, 4), plan);
  CHECK(q7.claim == Claim::none);
  REQUIRE(q7.certificates.size() == 1);
  CHECK_FALSE(q7.certificates[0].valid());
}

TEST_CASE("verify reports are deterministic") {
  SamplePlan plan;
  plan.val_lo = -2;
  plan.val_hi = 3;
  plan.lead_cap = 3;
  plan.tails_per_lead = 2;
  plan.seed = 17;
  plan.refute.budget = 1000;
  plan.refute.max_samples = 3;
  const auto K = LocalField::laurent(make_field(3, 1), 5);
  const auto spec = FormulaSpec::make_finite(3);
  const std::string a = dump(to_json(verify_definition(spec, K, plan)));
  const std::string b = dump(to_json(serial::verify_definition(spec, K, plan)));
  const std::string c = dump(to_json(verify_definition(spec, K, plan)));
  CHECK(a == b);
  CHECK(a == c);
  plan.seed = 18;
  CHECK(dump(to_json(verify_definition(spec, K, plan))) != a);
}

TEST_CASE("sample elements") {
  const auto K = LocalField::padic(101, 4);
  SamplePlan plan;
  plan.val_lo = -1;
  plan.val_hi = 1;
  plan.lead_cap = 5;
  const auto xs = sample_elements(K, plan);
  CHECK(xs.size() == 1 + 5 + 100 + 5);
  CHECK(xs[0].is_zero());
  for (std::size_t i = 1; i < xs.size(); ++i) CHECK(xs[i].known_prec() == 4);
}

TEST_CASE("uniform evaluation") {
  const auto K311 = LocalField::padic(311, 4);
  const UniformVerdict a = eval_uniform(7, K311, K311.monomial(-1, FqElem{1}));
  CHECK(a.membership == UniformVerdict::Membership::accepted);
  REQUIRE(a.witness.has_value());
  CHECK(a.witness->valid(4));
  for (const auto& c : a.conjuncts) CHECK(c.square);

  const auto K83 = LocalField::padic(83, 4);
  const UniformEvaluator ev(7, K83);
  const UniformVerdict r = ev.evaluate(K83.monomial(-1, FqElem{1}));
  CHECK(r.membership == UniformVerdict::Membership::rejected);
  CHECK(r.rejecting_conjunct == 2);  // 83 = 3 mod 8
  const UniformVerdict u = ev.evaluate(K83.from_int(5));
  CHECK(u.membership == UniformVerdict::Membership::accepted);

  CHECK_THROWS_AS(eval_uniform(7, LocalField::padic(2), LocalField::padic(2).one()), std::invalid_argument);
  CHECK_THROWS_AS(UniformEvaluator(7, LocalField::laurent(make_field(3, 2))), std::invalid_argument);
}
