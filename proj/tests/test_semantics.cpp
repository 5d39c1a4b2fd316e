#include <doctest.h>

#include "hx/cli.hpp"
#include "hx/extract.hpp"
#include "hx/models.hpp"
#include "hx/semantics.hpp"
#include "support.hpp"

using namespace hx;

namespace {

struct Run {
  Val value;
  State state;
};

Run run(const std::string& term, const Document& d, const State& s) {
  StTerm t = parse_st(term, d.theory);
  EvalCtx cx{&d.semantics(), &d.theory.sig, nullptr};
  auto [v, after] = eval({}, t, s, cx);
  return {v, after};
}

const Document& sort3() { return hxtest::corpus("sort3.slp"); }
const Document& ins() { return hxtest::corpus("insertion_sort.slp"); }
const Document& rw() { return hxtest::corpus("readwrite.slp"); }

}  // namespace

TEST_CASE("first-order terms leave the state alone") {
  State s{4, 1, 2, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9};
  Run r = run("mul <add <2, 3>, pred(4)>", ins(), s);
  CHECK(r.state == s);
  CHECK(value_json(r.value) == 15);
}

TEST_CASE("recursion") {
  State s{1, 2, 3};
  Run r = run("rec(skip, fun x -> fun (y : C) -> y) 3", sort3(), s);
  CHECK(r.state == s);
  CHECK(r.value->kind == Value::Kind::Unit);
  Run sum = run("rec(0, fun x -> fun y -> succ y) 3", ins(), State(16, 0));
  CHECK(value_json(sum.value) == 3);
}

TEST_CASE("while runs the step until the condition fails") {
  State s(16, 0);
  s[0] = 1;
  s[1] = 2;
  s[2] = 3;
  s[3] = 5;
  s[4] = 0;
  // Insert cell 4 into the sorted prefix 0..3.
  Run r = run("while[z. comp(z)](fun n -> fun (y : C) -> swap n, fun n -> fun (y : C) -> skip, fun (y : C) -> skip, 4) skip",
              ins(), s);
  CHECK(State(r.state.begin(), r.state.begin() + 5) == State{0, 1, 2, 3, 5});
}

TEST_CASE("elim evaluates both branch functions before the case split") {
  Document d = hxtest::doc_from("theory \"readwrite.slt\"\n");
  Run r = run("elim(inl[C](c), (write c * (fun x -> x)), (calc * (fun (y : C) -> c)))", d, QuerySolveModel::empty());
  auto m = make_model("query_solve");
  CHECK(m->serialize(r.state)["query"].is_number());
}

TEST_CASE("three-element sort on [3,2,1]") {
  const Document& d = sort3();
  ProofOutcome o = check_named(d, *d.find("sort3"));
  REQUIRE(o.ok);
  EvalCtx cx{&d.semantics(), &d.theory.sig, nullptr};
  auto [v, s] = eval({}, *o.realizer, State{3, 2, 1}, cx);
  CHECK(s == State{1, 2, 3});
  CHECK(v->kind == Value::Kind::Unit);
}

TEST_CASE("state formulas") {
  auto sw = make_model("swap3");
  EvalCtx cx{sw.get(), &sort3().theory.sig, nullptr};
  CHECK(eval_state_formula(StateFormula::top(), {}, State{0, 0, 0}, cx));
  CHECK_FALSE(eval_state_formula(parse_state_formula("2 <= 3", sort3().theory), {}, State{1, 3, 2}, cx));
  auto is = make_model("insertion_sort");
  EvalCtx icx{is.get(), &ins().theory.sig, nullptr};
  for (const State& s : is->sample_states(3, 50))
    CHECK(eval_state_formula(parse_state_formula("comp(0)", ins().theory), {}, s, icx));
}

TEST_CASE("realizability checks") {
  const Document& d = rw();
  ProofOutcome o = check_named(d, *d.find("readwrite"));
  REQUIRE(o.ok);
  Budget b;
  b.states = 40;
  RealizeReport r = check_realizes(*o.realizer, *o.triple, d.theory, d.semantics(), b);
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.states_checked > 0);

  Triple trivial{StateFormula::top(), MainFormula::top(), StateFormula::top()};
  CHECK(check_realizes(StTerm::skip(), trivial, d.theory, d.semantics(), b).verdict == Verdict::Pass);

  Triple sorted{StateFormula::top(), MainFormula::top(), StateFormula::atom("sorted")};
  RealizeReport bad = check_realizes(StTerm::skip(), sorted, sort3().theory, sort3().semantics(), b);
  CHECK(bad.verdict == Verdict::Fail);
  CHECK(bad.counterexample.contains("state"));

  Triple never{StateFormula::bot(), MainFormula::top(), StateFormula::top()};
  CHECK(check_realizes(StTerm::skip(), never, d.theory, d.semantics(), b).verdict == Verdict::Inconclusive);
}

TEST_CASE("currying") {
  const Theory& th = sort3().theory;
  const StateModel& m = sort3().semantics();
  auto states = Swap3Model::all_small_states();
  CurryInstance plain{parse_st("<x, y>", th), "x", "y", StType::c(), StType::c(), parse_st("<skip, skip>", th)};
  CHECK(currying_check(plain, th, m, states, 1).verdict == Verdict::Pass);
  CurryInstance fx{parse_st("(swap13 * <y, x>)", th), "x", "y", StType::d(), StType::c(),
                   parse_st("<(swap12 * 2), swap23>", th)};
  CHECK(currying_check(fx, th, m, states, 2).verdict == Verdict::Pass);
  CHECK_THROWS_AS(currying_check(CurryInstance{parse_st("<x, y>", th), "x", "y", StType::d(), StType::c(),
                                               parse_st("<skip, 2>", th)},
                                 th, m, states, 3),
                  TypeError);
}

TEST_CASE("metatheory reading") {
  const Theory& th = rw().theory;
  CHECK(embed_main_formula(parse_main_formula("P(x, y)", th)) == "P(x, y)");
  std::string t = embed_main_formula(parse_main_formula("true => {stored(x)} true {solved(x)}", th));
  CHECK(t.find("∃π") != std::string::npos);
}
