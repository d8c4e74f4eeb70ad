#include "doctest.h"
#include "sd/formula.hpp"

using namespace sd;

TEST_CASE("parses the connectives with the usual precedence") {
  AtomTable t;
  auto f = parse_formula("A -> B & L", t);
  CHECK(f.kind() == Connective::Implies);
  CHECK(f.operands()[1].kind() == Connective::And);

  auto g = parse_formula("!H -> G & !A", t);
  CHECK(g.kind() == Connective::Implies);
  CHECK(g.operands()[0].kind() == Connective::Not);
  CHECK(to_string(g, t) == "!H -> G & !A");

  auto h = parse_formula("B | F -> H", t);
  CHECK(h.operands()[0].kind() == Connective::Or);
}

TEST_CASE("implication and equivalence associate to the right") {
  AtomTable t;
  auto f = parse_formula("a -> b -> c", t);
  CHECK(f.operands()[1].kind() == Connective::Implies);
  CHECK(f == parse_formula("a -> (b -> c)", t));
  CHECK(f != parse_formula("(a -> b) -> c", t));
  CHECK(to_string(parse_formula("(a -> b) -> c", t), t) == "(a -> b) -> c");
  CHECK(parse_formula("a <-> b <-> c", t) == parse_formula("a <-> (b <-> c)", t));
}

TEST_CASE("printing round-trips") {
  AtomTable t;
  for (const char* s : {"a", "!a", "!!a", "a & b & c", "(a | b) & c", "a | b & c", "!(a & b)", "(a <-> b) -> c",
                        "a -> (b <-> c)", "(a & b) & c", "a | (b | c)", "!(a -> b) | c"}) {
    auto f = parse_formula(s, t);
    CHECK(parse_formula(to_string(f, t), t) == f);
  }
}

TEST_CASE("syntax errors carry positions") {
  AtomTable t;
  try {
    parse_formula("a & (b | ", t, 7);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 7);
    CHECK(e.column() >= 9);
  }
  CHECK_THROWS_AS(parse_formula("", t), ParseError);
  CHECK_THROWS_AS(parse_formula("a b", t), ParseError);
  CHECK_THROWS_AS(parse_formula("a & & b", t), ParseError);
  CHECK_THROWS_AS(parse_formula("a $ b", t), ParseError);
}

TEST_CASE("atoms are interned once") {
  AtomTable t;
  parse_formula("x -> y | x", t);
  CHECK(t.size() == 2);
  CHECK(t.contains("x"));
  CHECK(t.name(t.intern("y")) == "y");
}

TEST_CASE("normalize identifies commutative rewrites") {
  AtomTable t;
  CHECK(normalize(parse_formula("b & a", t)) == normalize(parse_formula("a & b", t)));
  CHECK(normalize(parse_formula("(a | b) | c", t)) == normalize(parse_formula("c | (b | a)", t)));
  CHECK(normalize(parse_formula("a <-> b", t)) == normalize(parse_formula("b <-> a", t)));
  CHECK(normalize(parse_formula("a -> b", t)) != normalize(parse_formula("b -> a", t)));
}

TEST_CASE("evaluation") {
  AtomTable t;
  auto f = parse_formula("!H -> G & !A", t);  // atoms H=0, G=1, A=2
  CHECK(evaluate(f, {true, false, true}));
  CHECK_FALSE(evaluate(f, {false, true, true}));
  CHECK(evaluate(f, {false, true, false}));

  std::vector<AtomId> atoms;
  collect_atoms(f, atoms);
  CHECK(atoms.size() == 3);
  CHECK(std::is_sorted(atoms.begin(), atoms.end()));
}
