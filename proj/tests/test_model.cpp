#include <doctest.h>

#include <random>

#include "chunkwise/model.hpp"
#include "chunkwise/syntax.hpp"
#include "support.hpp"

using namespace chunkwise;
using testing::OPair;

namespace {

std::string ev(ModelId m, const char* s) { return eval_to_string(m, parse_term(s)); }

PairFracVal pair(ModelId m, const Term& t) { return std::get<PairFracVal>(eval_frac(m, t)); }
RatFracVal rat(ModelId m, const Term& t) { return std::get<RatFracVal>(eval_frac(m, t)); }

OPair to_o(const PairFracVal& p) { return {static_cast<std::int64_t>(p.numer), static_cast<std::int64_t>(p.denom)}; }

const AxiomSchema& ax(const char* id) { return *builtin_catalog().find_axiom(id); }

}  // namespace

TEST_CASE("model names") {
  CHECK(parse_model_id("Mgcd") == ModelId::Mgcd);
  CHECK(parse_model_id("Q0") == ModelId::Q0);
  CHECK_FALSE(parse_model_id("R"));
  CHECK(model_name(ModelId::Qa) == "Qa");
}

TEST_CASE("pair model evaluation") {
  CHECK(ev(ModelId::M, "a + 1") == "a");
  CHECK(ev(ModelId::M, "num(3/0)") == "a");
  CHECK(ev(ModelId::M, "num(1/2)") == "1");
  CHECK(ev(ModelId::M, "denom(2/4)") == "4");
  CHECK(ev(ModelId::M, "3/0") == "(3,0)");
  CHECK(ev(ModelId::M, "a/2") == "(0,0)");
  CHECK(ev(ModelId::M, "1/2 + 1/3") == "(0,0)");
  CHECK(ev(ModelId::M, "1/2 + 1/2") == "(2,2)");
  CHECK(ev(ModelId::M, "1/2 * 3/4") == "(3,8)");
  CHECK(ev(ModelId::M, "1/2 * 3/0") == "(0,0)");
  CHECK(ev(ModelId::Mgcd, "1/2 + 1/3") == "(5,6)");
  CHECK(ev(ModelId::Mgcd, "1/2 + 1/2") == "(2,2)");
  CHECK(ev(ModelId::Mgcd, "1/4 + 1/6") == "(5,12)");
}

TEST_CASE("rational model evaluation") {
  CHECK(ev(ModelId::Q0, "a") == "0");
  CHECK(ev(ModelId::Qa, "a") == "a");
  CHECK(ev(ModelId::Q0, "1/2 + 1/3") == "5/6");
  CHECK(ev(ModelId::Q0, "3/0") == "0");
  CHECK(ev(ModelId::Qa, "3/0 + 1/2") == "a");
  CHECK(ev(ModelId::Q0, "num(2/4)") == "1");
  CHECK(ev(ModelId::Q0, "denom(2/4)") == "2");
  CHECK(ev(ModelId::Qa, "num(1/0)") == "a");
  CHECK(ev(ModelId::Q0, "num(0/5)") == "0");
  CHECK(ev(ModelId::Q0, "denom(0/5)") == "1");
}

TEST_CASE("holds") {
  CHECK(holds(ModelId::M, parse_equation("1/2 + 1/2 = 2/2")));
  CHECK_FALSE(holds(ModelId::M, parse_equation("1/2 + 1/3 = 5/6")));
  CHECK(holds(ModelId::Q0, parse_equation("1/2 + 1/3 = 5/6")));
  CHECK(holds(ModelId::Qa, parse_equation("2/4 = 1/2")));
  CHECK_FALSE(holds(ModelId::M, parse_equation("2/4 = 1/2")));
  CHECK_FALSE(holds(ModelId::M, parse_equation("1 + 1 = 4")));
  CHECK_FALSE(holds(ModelId::Q0, parse_equation("1 + 1 = 4")));
}

TEST_CASE("check_axiom, exhaustive") {
  CheckBounds b;
  b.nat_bound = 3;
  CheckEntry nine = check_axiom(ModelId::M, ax("9"), b);
  CHECK(nine.status == CheckStatus::Falsified);
  REQUIRE(nine.witness);
  // First admissible counterexample in lexicographic order (k, l, m, n).
  CHECK(print_valuation(*nine.witness) == "{k=1, l=0, m=2, n=0}");
  Equation inst = instantiate_axiom(ax("9"), *nine.witness);
  CHECK_FALSE(holds(ModelId::M, inst));

  b.nat_bound = 5;
  CHECK(check_axiom(ModelId::M, ax("10"), b).status == CheckStatus::Verified);
  CHECK(check_axiom(ModelId::Q0, ax("20"), b).status == CheckStatus::Verified);
  CHECK(check_axiom(ModelId::Q0, ax("16"), b).status == CheckStatus::Falsified);

  // 18 has two Nat variables, one of them conditioned: 6 * 5 admissible instances.
  CheckEntry e18 = check_axiom(ModelId::M, ax("18"), b);
  CHECK(e18.status == CheckStatus::Verified);
  CHECK(e18.instances == 30);
}

TEST_CASE("the known witness of axiom 9 replays") {
  Valuation w;
  w.nat = {{"n", 1}, {"m", 2}, {"l", 1}, {"k", 3}};
  Equation e = instantiate_axiom(ax("9"), w);
  CHECK(eval_to_string(ModelId::M, e.lhs) == "(0,0)");
  CHECK(eval_to_string(ModelId::M, e.rhs) == "(5,6)");
}

TEST_CASE("check_theory") {
  CheckBounds b;
  b.nat_bound = 3;
  CheckReport g = check_theory(ModelId::M, builtin_catalog().resolve("gamma"), b);
  CHECK(g.falsified());
  REQUIRE(g.entry("9"));
  CHECK(g.entry("9")->status == CheckStatus::Falsified);
  CHECK(g.entry("1")->status == CheckStatus::Verified);

  b.nat_bound = 4;
  b.frac_depth = 1;
  CheckReport qa = check_theory(ModelId::Qa, builtin_catalog().resolve("rho_st+gamma_t"), b, 4);
  CHECK_FALSE(qa.falsified());

  SUBCASE("parallel run gives the same report") {
    CheckBounds s;
    s.nat_bound = 3;
    nlohmann::json one = to_json(check_theory(ModelId::M, builtin_catalog().resolve("gamma"), s, 1));
    nlohmann::json many = to_json(check_theory(ModelId::M, builtin_catalog().resolve("gamma"), s, 6));
    CHECK(one == many);
    CHECK(one["verdict"] == "falsified");
    CHECK(one["entries"][8]["axiom"] == "9");
    CHECK(one["entries"][8]["witness"]["m"] == 2);
  }
}

TEST_CASE("random mode is seeded") {
  CheckBounds b;
  b.mode = CheckMode::Random;
  b.count = 200;
  b.seed = 42;
  b.nat_bound = 6;
  b.frac_depth = 1;
  CheckEntry x = check_axiom(ModelId::Q0, ax("15"), b);
  CheckEntry y = check_axiom(ModelId::Q0, ax("15"), b);
  CHECK(x.status == CheckStatus::Verified);
  CHECK(x.instances == 200);
  CHECK(to_json(check_theory(ModelId::Q0, builtin_catalog().resolve("gamma_t"), b))["entries"] ==
        to_json(check_theory(ModelId::Q0, builtin_catalog().resolve("gamma_t"), b))["entries"]);
  CHECK(check_axiom(ModelId::M, ax("9"), b).status == CheckStatus::Falsified);
  (void)y;
}

TEST_CASE("oracle: ground terms agree with a machine-integer evaluator") {
  testing::TermGen gen(2024);
  gen.with_vars = false;
  gen.max_lit = 5;
  testing::PairOracle m_or{false}, g_or{true};
  testing::RatOracle q0_or{false}, qa_or{true};
  for (int i = 0; i < 2000; ++i) {
    Term t = gen.frac(3);
    CHECK(to_o(pair(ModelId::M, t)) == m_or.frac(t));
    CHECK(to_o(pair(ModelId::Mgcd, t)) == g_or.frac(t));
    RatFracVal q = rat(ModelId::Q0, t);
    testing::ORat o = q0_or.frac(t);
    CHECK(q.value == Rational(o.p, o.q));
    RatFracVal qa = rat(ModelId::Qa, t);
    testing::ORat oa = qa_or.frac(t);
    CHECK(qa.error == oa.err);
    if (!oa.err) CHECK(qa.value == Rational(oa.p, oa.q));

    Term n = gen.nat(3);
    auto mv = eval_nat(ModelId::M, n);
    auto mo = m_or.nat(n);
    CHECK(mv.error == !mo.has_value());
    if (mo) CHECK(mv.value == *mo);
    auto zv = eval_nat(ModelId::Q0, n);
    auto zo = q0_or.nat(n);
    REQUIRE(zo.has_value());
    CHECK_FALSE(zv.error);
    CHECK(zv.value == *zo);
  }
}

TEST_CASE("property: gcd pairs and zero-totalised rationals agree off the error") {
  testing::TermGen gen(99);
  gen.with_vars = false;
  gen.with_err = false;
  gen.with_proj = false;
  gen.max_lit = 6;
  int compared = 0;
  for (int i = 0; i < 3000; ++i) {
    Term t = gen.frac(3);
    PairFracVal p = pair(ModelId::Mgcd, t);
    if (p.denom == 0) continue;
    // Skip terms whose constructors have a zero denominator anywhere.
    bool clean = true;
    for (const auto& pos : positions(t)) {
      const Term& s = subterm_at(t, pos);
      if (s.kind() == Kind::Frac && literal_value(s.child(1)) == Natural(0)) clean = false;
    }
    if (!clean) continue;
    ++compared;
    CHECK(Rational(p.numer, p.denom) == rat(ModelId::Q0, t).value);
  }
  CHECK(compared > 500);
}

TEST_CASE("property: gcd addition laws on random pairs") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<unsigned> num(0, 30), den(1, 30);
  auto rnd = [&] { return Term::frac(Term::lit(num(rng)), Term::lit(den(rng))); };
  for (int i = 0; i < 1000; ++i) {
    Term x = rnd(), y = rnd(), z = rnd();
    CHECK(pair(ModelId::Mgcd, Term::fadd(Term::fadd(x, y), z)) == pair(ModelId::Mgcd, Term::fadd(x, Term::fadd(y, z))));
    CHECK(pair(ModelId::Mgcd, Term::fadd(x, y)) == pair(ModelId::Mgcd, Term::fadd(y, x)));
    Term same = Term::frac(Term::lit(num(rng)), x.child(1));
    PairFracVal s = pair(ModelId::Mgcd, Term::fadd(x, same));
    CHECK(s.numer == x.child(0).value() + same.child(0).value());
    CHECK(s.denom == x.child(1).value());
  }
}

TEST_CASE("property: the pair model absorbs (0,0) under addition") {
  testing::TermGen gen(3);
  gen.with_vars = false;
  Term zero = parse_term("a/1");
  for (int i = 0; i < 300; ++i) {
    Term x = gen.frac(2);
    CHECK(pair(ModelId::M, Term::fadd(x, zero)) == PairFracVal{0, 0});
    CHECK(pair(ModelId::M, Term::fadd(zero, x)) == PairFracVal{0, 0});
  }
}

TEST_CASE("property: rational values are canonical") {
  testing::TermGen gen(8);
  gen.with_vars = false;
  for (int i = 0; i < 500; ++i) {
    RatFracVal v = rat(ModelId::Q0, gen.frac(3));
    auto n = numerator(v.value), d = denominator(v.value);
    CHECK(d >= 1);
    CHECK(n >= 0);
    CHECK(gcd(n, d) == 1);
  }
}
