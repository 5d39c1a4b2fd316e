#include <doctest.h>

#include "hx/parse.hpp"
#include "hx/print.hpp"
#include "support.hpp"

using namespace hx;

namespace {

const Theory& pl() {
  static Document d = hxtest::doc_from(
      "func c 0\nfunc f 1\npred P 2\npred Q 1\nstatepred p 1\nstatepred q 1\nstatepred alpha 0\n");
  return d.theory;
}

VarSet vars(std::initializer_list<const char*> xs) {
  VarSet v;
  for (auto x : xs) v.insert(x);
  return v;
}

}  // namespace

TEST_CASE("free variables") {
  CHECK(free_vars(parse_main_formula("P(x, y)", pl())) == vars({"x", "y"}));
  CHECK(free_vars(parse_main_formula("all x. {p(x)} P(x, y) {true}", pl())) == vars({"y"}));
  CHECK(free_vars(parse_term("f(c)", pl())).empty());
}

TEST_CASE("substitution avoids capture") {
  Term fc = parse_term("f(c)", pl());
  CHECK(to_string(subst(parse_main_formula("Q(x)", pl()), "x", fc)) == "Q(f(c))");
  MainFormula e = subst(parse_main_formula("ex x. P(x, y)", pl()), "y", Term::var("x"));
  REQUIRE(e.kind() == MainFormula::Kind::Exists);
  CHECK(e.var() != "x");
  CHECK(alpha_eq(e, parse_main_formula("ex z. P(z, x)", pl())));
  CHECK(subst(parse_state_formula("p(x) /\\ q(z)", pl()), "x", Term::app("c")) ==
        parse_state_formula("p(c) /\\ q(z)", pl()));
}

TEST_CASE("alpha equivalence") {
  CHECK(alpha_eq(parse_main_formula("all x. {true} Q(x) {true}", pl()),
                 parse_main_formula("all y. {true} Q(y) {true}", pl())));
  CHECK_FALSE(alpha_eq(parse_main_formula("Q(x)", pl()), parse_main_formula("Q(y)", pl())));
  CHECK(alpha_eq(parse_main_formula("ex x. Q(x)", pl()), parse_main_formula("ex y. Q(y)", pl())));
}

TEST_CASE("unicode and ascii input agree") {
  CHECK(alpha_eq(parse_triple("{alpha} all x. {p(x)} ex y. P(x, y) {true} {alpha}", pl()),
                 parse_triple("⟨alpha⟩∀x⟨p(x)⟩∃y. P(x, y)⟨⊤⟩⟨alpha⟩", pl())));
  CHECK(parse_state_formula("~p(c) \\/ q(c)", pl()) == parse_state_formula("¬p(c) ∨ q(c)", pl()));
}

TEST_CASE("greek identifiers") {
  Document d = hxtest::doc_from("statepred α 0\nstatepred β 0\n");
  CHECK(to_string(parse_state_formula("α /\\ β", d.theory), Notation::Unicode) == "α ∧ β");
  CHECK_THROWS_AS(hxtest::doc_from("statepred λ 0\n"), ParseError);
}

TEST_CASE("formula printing round-trips") {
  for (const char* s : {"P(x, f(c))", "Q(c) /\\ (ex y. P(c, y)) \\/ false",
                        "all x. {p(x) -> q(x)} Q(x) => {alpha} P(x, x) {true} {~p(x)}", "ex x. ex y. P(x, y)"}) {
    MainFormula a = parse_main_formula(s, pl());
    CHECK(parse_main_formula(to_string(a), pl()) == a);
    CHECK(parse_main_formula(to_string(a, Notation::Unicode), pl()) == a);
  }
}

TEST_CASE("state sequents") {
  StateSequent s = parse_state_sequent("p(c), q(c) |- p(c) /\\ q(c)", pl());
  CHECK(s.hyps.size() == 2);
  CHECK(s.goal.kind() == StateFormula::Kind::And);
}

TEST_CASE("numerals") {
  Document sa = hxtest::doc_from("mode sa\nstatepred sort 1\n");
  CHECK(parse_term("3", sa.theory) == numeral(3));
  CHECK(parse_term("n + 2", sa.theory) == succ_n(Term::var("n"), 2));
  CHECK(parse_term("pred(4)", sa.theory) == Term::app("pred", {numeral(4)}));
  CHECK_THROWS_AS(parse_term("7", pl()), ParseError);
}

TEST_CASE("theory declarations") {
  const Theory& rw = hxtest::corpus("readwrite.slt").theory;
  CHECK(rw.sig.state_predicates.size() == 2);
  CHECK(rw.sig.predicates.size() == 1);
  CHECK(rw.saxioms.size() == 3);
  CHECK_THROWS_AS(hxtest::doc_from("statepred stored 1\nstatepred stored 2\n"), ParseError);
  Document t = hxtest::doc_from("func 1 0\nfunc 2 0\nstatepred le 2\nhaxiom tot(l, l'): |- le(l, l') \\/ le(l', l)\n");
  REQUIRE(t.theory.haxioms.size() == 1);
  CHECK(t.theory.haxioms[0].metavars.size() == 2);
}

TEST_CASE("parse errors carry positions") {
  try {
    hxtest::doc_from("func c 0\nproof bad: |- {true} true {true}\n  (and_I (top {true}))\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span.line == 3);
    CHECK(std::string(e.what()).find("<test>:3:") == 0);
  }
}

TEST_CASE("documents round-trip through the printer") {
  for (const char* f : {"readwrite.slp", "sort3.slp", "insertion_sort.slp", "pl.slp", "ha.slp"}) {
    CAPTURE(f);
    const Document& d = hxtest::corpus(f);
    std::string text = print_document(d);
    Document again = parse_document(text, "<printed>", hxtest::corpus_path(""));
    REQUIRE(again.proofs.size() == d.proofs.size());
    for (std::size_t i = 0; i < d.proofs.size(); ++i) {
      CAPTURE(d.proofs[i].name);
      CHECK(print_derivation(*again.proofs[i].deriv) == print_derivation(*d.proofs[i].deriv));
    }
    CHECK(print_document(again) == text);
  }
}
