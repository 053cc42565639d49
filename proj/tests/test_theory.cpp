#include <doctest.h>

#include "support.hpp"

using namespace tsprover;
using namespace testsupport;

TEST_CASE("the sets theory parses fully resolved") {
  const Theory& th = sets_theory();
  CHECK(th.name == "sets");
  CHECK(th.functions.size() == 9);
  CHECK(th.predicates.size() == 3);
  CHECK(th.axioms.size() == 9);
  CHECK(th.precedence.size() == 2);
  CHECK(validate_theory(th).empty());
  CHECK(th.precedes(*th.find_predicate("in"), *th.find_predicate("subseteq")));
  CHECK(th.precedes(*th.find_predicate("in"), *th.find_predicate("disj")));
  CHECK_FALSE(th.precedes(*th.find_predicate("subseteq"), *th.find_predicate("in")));
}

TEST_CASE("render and reparse yields a structurally identical theory") {
  const Theory& th = sets_theory();
  Theory again = parse_theory(render_theory(th));
  CHECK(again.name == th.name);
  CHECK(again.functions == th.functions);
  CHECK(again.predicates == th.predicates);
  CHECK(again.precedence == th.precedence);
  REQUIRE(again.axioms.size() == th.axioms.size());
  for (size_t i = 0; i < th.axioms.size(); i++) {
    CHECK(again.axioms[i].name == th.axioms[i].name);
    CHECK(fo_equal(again.axioms[i].formula, th.axioms[i].formula));
  }
  // the parser enforces what validation reports
  CHECK(validate_theory(again).empty());
}

TEST_CASE("reflexive precedence is rejected as a cycle") {
  CHECK_THROWS_WITH_AS(parse_theory("theory t\n"
                                    "predicate in 2\n"
                                    "order in < in\n"),
                       doctest::Contains("cycle"), Error);
}

TEST_CASE("two-pair precedence cycles are reported") {
  Theory th;
  th.name = "t";
  th.predicates = {Symbol{"in", SymbolKind::Predicate, 2},
                   Symbol{"subseteq", SymbolKind::Predicate, 2}};
  th.precedence = {{"in", "subseteq"}, {"subseteq", "in"}};
  auto violations = validate_theory(th);
  REQUIRE(!violations.empty());
  CHECK(violations.front().find("cycle") != std::string::npos);
}

TEST_CASE("unbound variables in axioms are rejected") {
  CHECK_THROWS_WITH_AS(parse_theory("theory t\n"
                                    "predicate in 2\n"
                                    "axiom a: forall x . in(x, y)\n"),
                       doctest::Contains("unbound variable 'y'"), ParseError);
}

TEST_CASE("axioms with top or bottom fail validation") {
  Theory th;
  th.name = "t";
  th.predicates = {Symbol{"p", SymbolKind::Predicate, 1}};
  th.axioms.push_back({"a", fo::forall(object_var("x"), fo::top())});
  auto violations = validate_theory(th);
  REQUIRE(!violations.empty());
  CHECK(violations.front().find("must not contain") != std::string::npos);
}

TEST_CASE("parse errors carry line and column information") {
  try {
    parse_theory("theory t\npredicate in 2\naxiom a: forall x . in(x,\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line >= 3);
  }
}

TEST_CASE("undeclared symbols and arity mismatches are parse errors") {
  CHECK_THROWS_WITH_AS(parse_theory("theory t\npredicate p 1\naxiom a: forall x . q(x)\n"),
                       doctest::Contains("undeclared predicate 'q'"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_theory("theory t\npredicate p 1\nfunction f 2\naxiom a: forall x . p(f(x))\n"),
      doctest::Contains("expects 2 argument(s)"), ParseError);
  CHECK_THROWS_WITH_AS(parse_theory("theory t\npredicate p 1\norder p < q\n"),
                       doctest::Contains("undeclared predicate 'q'"), ParseError);
}

TEST_CASE("connective precedence parses as expected") {
  Theory th = parse_theory(
      "theory t\npredicate p 1\n"
      "axiom a: forall x . not p(x) and p(x) or p(x) -> p(x) -> p(x)\n");
  FOPtr body = th.axioms[0].formula->lhs;  // strip the quantifier
  // ((not p and p) or p) -> (p -> p)
  REQUIRE(body->kind == FOFormula::Kind::Implies);
  CHECK(body->lhs->kind == FOFormula::Kind::Or);
  CHECK(body->lhs->lhs->kind == FOFormula::Kind::And);
  CHECK(body->lhs->lhs->lhs->kind == FOFormula::Kind::Not);
  CHECK(body->rhs->kind == FOFormula::Kind::Implies);
}

TEST_CASE("quantifier scope extends as far right as possible") {
  Theory th = parse_theory(
      "theory t\npredicate p 1\npredicate q 2\n"
      "axiom a: forall x . p(x) -> (forall y . q(x, y) -> p(y))\n");
  FOPtr body = th.axioms[0].formula->lhs;
  REQUIRE(body->kind == FOFormula::Kind::Implies);
  // the inner quantifier captures the whole implication inside the parens
  REQUIRE(body->rhs->kind == FOFormula::Kind::ForAll);
  CHECK(body->rhs->lhs->kind == FOFormula::Kind::Implies);
}

TEST_CASE("exercise files parse one signed formula per line") {
  auto sfs = exercise("# comment\n+ in(x, inter(y, z))\n- in(x, y)\n");
  REQUIRE(sfs.size() == 2);
  CHECK(sfs[0].sign == Sign::Assert);
  CHECK(to_string(sfs[1]) == "- in(x, y)");
}

TEST_CASE("exercises with connectives are rejected with the scope message") {
  CHECK_THROWS_WITH_AS(exercise("+ in(x, y) and in(y, z)\n"), doctest::Contains("outside the scope"),
                       Error);
  CHECK_THROWS_WITH_AS(exercise("+ forall x . in(x, y)\n"), doctest::Contains("outside the scope"),
                       Error);
}

TEST_CASE("exercises reject undeclared and skolem symbols") {
  CHECK_THROWS_WITH_AS(exercise("+ member(x, y)\n"), doctest::Contains("undeclared"), Error);
  CHECK_THROWS_WITH_AS(exercise("+ in(sk_ax_disj_1(x, y), x)\n"),
                       doctest::Contains("undeclared function"), Error);
  CHECK_THROWS_WITH_AS(exercise("+ in(sk_ax_disj_1, x)\n"), doctest::Contains("skolem"), Error);
  CHECK_THROWS_WITH_AS(exercise("in(x, y)\n"), doctest::Contains("sign"), Error);
}
