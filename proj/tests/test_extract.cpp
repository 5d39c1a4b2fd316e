#include <doctest.h>

#include "hx/cli.hpp"
#include "hx/extract.hpp"
#include "hx/kernel.hpp"
#include "support.hpp"

using namespace hx;

namespace {

StTerm realizer(const std::string& file, const std::string& name) {
  const Document& d = hxtest::corpus(file);
  ProofOutcome o = check_named(d, *d.find(name));
  REQUIRE(o.ok);
  return *o.realizer;
}

std::string text(const StTerm& t) { return to_string(t); }

const Document& pl() { return hxtest::corpus("pl.slp"); }

StTerm extract_pl(const std::string& name) {
  return extract(*embed_pl(pl().find(name)->deriv, StateFormula::top()), pl().theory);
}

}  // namespace

TEST_CASE("rule clauses") {
  CHECK(text(extract_pl("identity")) == "fun x_u -> x_u");
  CHECK(text(extract_pl("and_comm")) == "fun x_u -> <p1(x_u), p0(x_u)>");
  CHECK(text(extract_pl("instantiate")) == "fun x_u -> x_u c");
  CHECK(text(extract_pl("witness")) == "fun x_u -> <c, x_u>");
  CHECK(text(extract_pl("ex_falso")) == "fun x_u -> default[C]");
  StTerm orc = extract_pl("or_comm");
  REQUIRE(orc.kid(0).kind() == StTerm::Kind::Elim);
}

TEST_CASE("golden realizers") {
  CHECK(text(cleanup_admin(realizer("readwrite.slp", "readwrite"))) == "fun x -> ((write x * calc) * read)");
  CHECK(text(realizer("sort3.slp", "sort3")) ==
        "((if 2 <= 3 then skip else swap23) * (if 2 <= 1 then (swap12 * (if 2 <= 3 then skip else swap23)) else "
        "skip))");
  StTerm ins = cleanup_admin(realizer("insertion_sort.slp", "insertion_sort"));
  REQUIRE(ins.kind() == StTerm::Kind::Rec);
  CHECK(ins.kid(0).kind() == StTerm::Kind::Skip);
}

TEST_CASE("existential elimination introduces the currying wrapper") {
  StTerm t = extract_pl("ex_swap");
  std::string before = text(t), after = text(cleanup_admin(t));
  CHECK(before.find("p0(") != std::string::npos);
  CHECK(after.size() <= before.size());
}

TEST_CASE("free-variable grounding") {
  const Theory& th = hxtest::corpus("readwrite.slt").theory;
  StTerm t = parse_st("fun y -> <z, y>", th);
  CHECK(text(free_var_ground(t, th)) == "fun y -> <c, y>");
  StTerm closed = parse_st("fun y -> y", th);
  CHECK(alpha_eq_st(free_var_ground(closed, th), closed));
  CHECK_THROWS_AS(free_var_ground(parse_st("f skip", th), th), Error);
}

TEST_CASE("realizers typecheck at the realizability type") {
  for (const char* f : {"readwrite.slp", "sort3.slp", "insertion_sort.slp", "pl.slp", "ha.slp"}) {
    const Document& d = hxtest::corpus(f);
    for (const auto& p : d.proofs) {
      CAPTURE(p.name);
      ProofOutcome o = check_named(d, p);
      REQUIRE(o.ok);
      CHECK(typecheck(extraction_context(*o.realizer, p.ctx), *o.realizer, d.theory.st_env()) ==
            real_type(o.triple->body));
    }
  }
}

TEST_CASE("realizability types") {
  const Theory& th = hxtest::corpus("readwrite.slt").theory;
  CHECK(to_string(real_type(parse_main_formula("ex y. P(x, y)", th))) == "D * C");
  CHECK(to_string(real_type(MainFormula::top())) == "C");
  CHECK(to_string(real_type(parse_main_formula("all x. {true} ex y. P(x, y) {true}", th))) == "D -> D * C");
}
