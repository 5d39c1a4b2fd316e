#include <doctest.h>

#include "hx/cli.hpp"
#include "hx/extract.hpp"
#include "hx/kernel.hpp"
#include "hx/print.hpp"
#include "support.hpp"

using namespace hx;

namespace {

const Document& rw() {
  static Document d = hxtest::doc_from("theory \"readwrite.slt\"\nstatepred α 0\nstatepred β 0\n");
  return d;
}

Triple concl(const std::string& deriv, const Document& d = rw(), const Context& ctx = {}) {
  return check(*parse_derivation(deriv, d.theory, &d), d.theory, ctx);
}

KernelError kernel_error(const std::string& deriv, const Document& d = rw(), const Context& ctx = {}) {
  try {
    concl(deriv, d, ctx);
  } catch (const KernelError& e) {
    return e;
  }
  FAIL("expected a kernel error for " << deriv);
  throw Error("unreachable");
}

}  // namespace

TEST_CASE("read-write conclusion") {
  const Document& d = hxtest::corpus("readwrite.slp");
  ProofOutcome o = check_named(d, *d.find("readwrite"));
  REQUIRE(o.ok);
  CHECK(to_string(Context{}, *o.triple, Notation::Unicode) == "⊢_S ⟨β⟩∀x⟨α⟩∃y. P(x, y)⟨⊤⟩⟨β⟩");
}

TEST_CASE("composition of state actions") {
  CHECK(to_string(Context{}, concl("(comp (top {true}) (top {true}))")) == "|- {true} true {true}");
  Triple t = concl("(comp (sax store x {α}) (sax solve x))");
  CHECK(t == parse_triple("{α} true {solved(x)}", rw().theory));
  KernelError e = kernel_error("(comp (sax store x {α}) (sax read x))");
  CHECK(e.kind == KernelError::Kind::StateMismatch);
}

TEST_CASE("conjunction threads the state") {
  KernelError e = kernel_error("(and_I (top {α}) (top {β}))");
  CHECK(e.kind == KernelError::Kind::StateMismatch);
  CHECK(e.rule == Rule::AndI);
  CHECK(concl("(and_I (top {α}) (top {α}))") == parse_triple("{α} true /\\ true {α}", rw().theory));
}

TEST_CASE("eigenvariable condition") {
  Context ctx({Hypothesis{"u", parse_main_formula("P(x, c)", rw().theory)}});
  KernelError e = kernel_error("(forall_I x (hyp u))", rw(), ctx);
  CHECK(e.kind == KernelError::Kind::Eigenvariable);
  CHECK(concl("(forall_I y (hyp u))", rw(), ctx) ==
        parse_triple("{true} all y. {true} P(x, c) {true} {true}", rw().theory));
}

TEST_CASE("insertion sort conclusion") {
  const Document& d = hxtest::corpus("insertion_sort.slp");
  ProofOutcome o = check_named(d, *d.find("insertion_sort"));
  REQUIRE(o.ok);
  CHECK(*o.triple == parse_triple("{true} all N. {true} true {sort(N)} {true}", d.theory));
}

TEST_CASE("predicate-logic embedding") {
  const Document& d = hxtest::corpus("pl.slp");
  DerivPtr id = d.find("identity")->deriv;
  CHECK(check_pl(*id, d.theory) == parse_main_formula("A => {true} A {true}", d.theory));
  CHECK(check(*embed_pl(id, StateFormula::top()), d.theory) ==
        parse_triple("{true} A => {true} A {true} {true}", d.theory));
  Document withp = hxtest::doc_from("theory \"pl.slp\"\nstatepred p 1\n");
  StateFormula pc = parse_state_formula("p(c)", withp.theory);
  Triple t = check(*embed_pl(withp.find("and_comm")->deriv, pc), withp.theory);
  CHECK(t == parse_triple("{p(c)} A /\\ B => {p(c)} B /\\ A {p(c)} {p(c)}", withp.theory));
  CHECK(check_pl(*d.find("ex_swap")->deriv, d.theory) ==
        parse_main_formula("(ex x. ex y. R(x, y)) => {true} ex y. ex x. R(x, y) {true}", d.theory));
}

TEST_CASE("pl checking rejects Hoare rules") {
  Document d = hxtest::doc_from("theory \"readwrite.slt\"\n");
  CHECK_THROWS_AS(check_pl(*parse_derivation("(sax solve c)", d.theory), d.theory), KernelError);
}

TEST_CASE("equality transport") {
  const Document& ha = hxtest::corpus("ha.slp");
  CHECK(check_pl(*ha.find("zero_add")->deriv, ha.theory) ==
        parse_main_formula("all x. {true} add(0, x) = x {true}", ha.theory));
  Document d = hxtest::doc_from("theory \"insertion_sort.slt\"\n");
  // add(0, 1) = 1 moves sort(add(0, 1)) to sort(1).
  DerivPtr eq = parse_derivation("(trans (defeq addS 0 0) (ext y [add(0, 0) + 1 = y + 1] (defeq add0 0) (refl add(0, 0) + 1)))",
                                 d.theory);
  CHECK(check_pl(*eq, d.theory) == parse_main_formula("add(0, 1) = 1", d.theory));
  StateFormula at = parse_state_formula("sort(add(0, 1))", d.theory);
  DerivPtr body = parse_derivation("(top {sort(add(0, 1))})", d.theory);
  DerivPtr moved = derive_ext(eq, "x", MainFormula::top(), StateFormula::atom("sort", {Term::var("x")}),
                              StateFormula::atom("sort", {Term::var("x")}), body, d.theory);
  CHECK(check(*moved, d.theory) == parse_triple("{sort(1)} true {sort(1)}", d.theory));
  (void)at;
  CHECK_THROWS_AS(derive_ext(eq, "x", MainFormula::top(), StateFormula::atom("comp", {Term::var("x")}),
                             StateFormula::atom("comp", {Term::var("x")}), body, d.theory),
                  Error);
}

TEST_CASE("cond needs both branches") {
  const Document& d = hxtest::corpus("sort3.slp");
  CHECK_THROWS_AS(parse_derivation("(cond {2 <= 3} {3 <= 2} auto (use sort3_d3))", d.theory, &d), ParseError);
}

TEST_CASE("check diagnostics name the failing node") {
  Document d = hxtest::doc_from(
      "theory \"readwrite.slt\"\nstatepred α 0\nproof bad: |- {α} true {solved(x)}\n"
      "  (comp (sax store x {α})\n        (sax read x))\n");
  ProofOutcome o = check_named(d, d.proofs.at(0));
  CHECK_FALSE(o.ok);
  CHECK(o.diagnostic.find("<test>:4:") == 0);
  CHECK(o.diagnostic.find("error[state-mismatch]") != std::string::npos);
}
