#include <doctest.h>

#include "chunkwise/cp.hpp"
#include "chunkwise/error.hpp"
#include "chunkwise/proof.hpp"
#include "chunkwise/syntax.hpp"
#include "support.hpp"

using namespace chunkwise;

namespace {

Term L(unsigned long long v) { return Term::lit(v); }
Term F(unsigned long long n, unsigned long long d) { return Term::frac(L(n), L(d)); }

ErrorKind parse_kind(auto&& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.kind();
  }
  FAIL("no ParseError");
  return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("term parsing") {
  CHECK(parse_term("1/2 + 1/3") == Term::fadd(F(1, 2), F(1, 3)));
  CHECK(parse_term("num(3/0) + a") == Term::add(Term::num(F(3, 0)), Term::err()));
  CHECK(parse_term("1 + 2 * 3") == Term::add(L(1), Term::mul(L(2), L(3))));
  CHECK(parse_term("1 + 2 + 3") == Term::add(Term::add(L(1), L(2)), L(3)));
  CHECK(parse_term("1/2 * 3/4") == Term::fmul(F(1, 2), F(3, 4)));
  CHECK(parse_term("(n + l)/m") == Term::frac(Term::add(Term::nvar("n"), Term::nvar("l")), Term::nvar("m")));
  CHECK(parse_term("alpha").kind() == Kind::FVar);
  CHECK(parse_term("  # comment\n 7 ") == L(7));
  CHECK(parse_term("123456789012345678901234567890").value() == Natural("123456789012345678901234567890"));
}

TEST_CASE("term parse errors") {
  CHECK(parse_kind([] { parse_term("1 + 1/2"); }) == ErrorKind::SortMismatch);
  CHECK(parse_kind([] { parse_term("1/2/3"); }) == ErrorKind::SortMismatch);
  CHECK(parse_kind([] { parse_term("num(1)"); }) == ErrorKind::SortMismatch);
  CHECK(parse_kind([] { parse_term("1 +"); }) == ErrorKind::Parse);
  CHECK(parse_kind([] { parse_term("x"); }) == ErrorKind::Parse);
  CHECK(parse_kind([] { parse_term("(1"); }) == ErrorKind::Parse);
  CHECK(parse_kind([] { parse_term("1 $ 2"); }) == ErrorKind::Parse);

  try {
    parse_term("1 +\n  1/2");
  } catch (const ParseError& e) {
    CHECK(e.span().line == 1);
    CHECK(e.span().column == 3);
  }
  try {
    parse_term("1 + x");
  } catch (const ParseError& e) {
    CHECK(e.span().line == 1);
    CHECK(e.span().column == 5);
    CHECK(e.span().length == 1);
  }
}

TEST_CASE("equations") {
  Equation e = parse_equation("1/2 + 1/2 = 2/2");
  CHECK(e.sort() == Sort::Frac);
  CHECK(e.rhs == F(2, 2));
  CHECK(parse_equation("num(1/2) = 1").sort() == Sort::Nat);
  CHECK(parse_kind([] { parse_equation("1/2 = 1"); }) == ErrorKind::SortMismatch);
  CHECK(parse_kind([] { parse_equation("1 = 1 = 1"); }) == ErrorKind::Parse);
  CHECK(parse_kind([] { parse_equation("1"); }) == ErrorKind::Parse);
}

TEST_CASE("printing") {
  CHECK(print_term(Term::fadd(F(1, 2), F(1, 3))) == "1/2 + 1/3");
  CHECK(print_term(Term::mul(Term::add(L(1), L(1)), L(2))) == "(1 + 1) * 2");
  CHECK(print_term(Term::err()) == "a");
  CHECK(print_term(parse_term("(n * k)/(m * k)")) == "(n * k)/(m * k)");
  CHECK(print_term(parse_term("1 + (2 + 3)")) == "1 + (2 + 3)");
  CHECK(print_term(parse_term("(1 + 2) + 3")) == "1 + 2 + 3");
  CHECK(print_term(parse_term("alpha * (beta + gamma)")) == "alpha * (beta + gamma)");
  CHECK(print_equation(parse_equation("num(1/2)=1")) == "num(1/2) = 1");
  Valuation v;
  v.nat["n"] = 1;
  v.nat["k"] = 3;
  v.frac.emplace("alpha", F(1, 2));
  CHECK(print_valuation(v) == "{k=3, n=1, alpha=1/2}");
}

TEST_CASE("theory files") {
  TheoryFile f = parse_theory_file(
      "axiom 10 [m /= 0]: n/m + l/m = (n+l)/m\n"
      "theory gamma_t { axioms 10 }\n");
  REQUIRE(f.axioms.size() == 1);
  CHECK(f.axioms[0].conditions.size() == 1);
  CHECK(f.axioms[0].variables().size() == 3);
  REQUIRE(f.theories.size() == 1);
  CHECK(f.theories[0].name == "gamma_t");

  CHECK(parse_kind([] { parse_theory_file("axiom 99 [q /= 0]: n/m = n/m"); }) ==
        ErrorKind::UnusedConditionVariable);
  CHECK(parse_kind([] { parse_theory_file("axiom 1: n = n\naxiom 1: m = m"); }) == ErrorKind::DuplicateAxiom);
  CHECK(parse_kind([] { parse_theory_file("theory t { axioms 5 }"); }) == ErrorKind::UndeclaredAxiom);
  CHECK(parse_kind([] { parse_theory_file("axiom 1: n = n\ntheory t { axioms 1 }\ntheory t { axioms 1 }"); }) ==
        ErrorKind::DuplicateTheory);
  CHECK(parse_kind([] { parse_theory_file("axiom 1: n = n/m"); }) == ErrorKind::SortMismatch);

  // Theories may reference a base catalog.
  TheoryFile g = parse_theory_file("theory mine { axioms 20, 19 }", &builtin_catalog());
  CHECK(g.theories.at(0).axioms.size() == 2);
}

TEST_CASE("cp configs") {
  CPConfig c = parse_cp_config(
      "cp fractions {\n"
      "  chunk S = gamma_s;\n"
      "  chunk T = gamma_t;\n"
      "  chunk U = { axioms 1, 2 };\n"
      "  permeate S -> T : except 16, 17;\n"
      "  permeate T -> U : only 20;\n"
      "  permeate U -> S : none;\n"
      "  designated T;\n"
      "}\n");
  CHECK(c.name == "fractions");
  REQUIRE(c.chunks.size() == 3);
  CHECK(c.chunks[2].axioms == std::vector<std::string>{"1", "2"});
  REQUIRE(c.edges.size() == 3);
  CHECK(c.edges[0].filter.kind == PermFilter::Kind::AllExcept);
  CHECK(c.edges[0].filter.ids == std::vector<std::string>{"16", "17"});
  CHECK(c.edges[1].filter.kind == PermFilter::Kind::Allow);
  CHECK(c.edges[2].filter.kind == PermFilter::Kind::Nothing);
  CHECK(c.designated == "T");
  CHECK(parse_kind([] { parse_cp_config("cp x { chunk S = gamma_s }"); }) == ErrorKind::Parse);
  CHECK(parse_kind([] { parse_cp_config("cp x { chunk S = gamma_s; designated S; designated S; }"); }) ==
        ErrorKind::Parse);
  CHECK(parse_kind([] { parse_cp_config("cp x { permeate S -> T : some 1; designated S; }"); }) == ErrorKind::Parse);
}

TEST_CASE("proof scripts round-trip through the printer") {
  const char* src =
      "proof p in gamma_s {\n"
      "  claim: 1/3 + 2/3 = 3/3;\n"
      "  start: 1/3 + 2/3;\n"
      "  step axiom 18 -> at [0] with {n=1, m=3};\n"
      "  step axiom 12 <- at [] with {alpha=1/2 + 1/3, beta=2/3};\n"
      "  step arith at [0,0];\n"
      "  step unfold at [1] to 1 + 2;\n"
      "}\n";
  CalcProof p = parse_proof_script(src);
  CHECK(p.name == "p");
  CHECK(p.theory == "gamma_s");
  CHECK(p.start == parse_term("1/3 + 2/3"));
  REQUIRE(p.steps.size() == 4);
  const AxiomStep* a = p.steps[1].axiom();
  REQUIRE(a);
  CHECK(a->direction == Direction::RL);
  CHECK(a->valuation.frac.at("alpha") == parse_term("1/2 + 1/3"));
  CHECK(p.steps[2].position() == Position{0, 0});
  CHECK(std::get<UnfoldStep>(p.steps[3].step).into == parse_term("1 + 2"));

  CalcProof q = parse_proof_script(print_proof_script(p));
  CHECK(q.claim == p.claim);
  CHECK(print_proof_script(q) == print_proof_script(p));
  CHECK(parse_proof_script("proof u in gamma_t+rho_st { claim: 1/2 = 1/2; start: 1/2; }").theory == "gamma_t+rho_st");
}

TEST_CASE("property: print then parse is the identity, depth up to 6") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    testing::TermGen gen(seed);
    for (int i = 0; i < 500; ++i) {
      Term t = gen.any(1 + static_cast<int>(gen.pick(6)));
      std::string s = print_term(t);
      Term back = parse_term(s);
      CHECK_MESSAGE(back == t, s);
    }
  }
}

TEST_CASE("property: parse error spans lie inside the input") {
  const char* bad[] = {"1 +", "(", ")", "1/2/3", "num 1", "1 = ", "alpha + 1", "denom(2)", "1 ++ 2", "q/"};
  for (const char* s : bad) {
    std::string in(s);
    try {
      parse_equation(in);
      FAIL("accepted " << in);
    } catch (const ParseError& e) {
      CHECK(e.span().line == 1);
      CHECK(e.span().column >= 1);
      CHECK(e.span().column + e.span().length <= in.size() + 2);
    }
  }
}
