#include <doctest.h>

#include "hx/parse.hpp"
#include "hx/st.hpp"
#include "support.hpp"

using namespace hx;

namespace {

const Theory& sort3() { return hxtest::corpus("sort3.slt").theory; }
const Theory& ins() { return hxtest::corpus("insertion_sort.slt").theory; }

StType type_of(const std::string& t, const Theory& th, const TypingCtx& ctx = {}) {
  return typecheck(ctx, parse_st(t, th), th.st_env());
}

}  // namespace

TEST_CASE("typing") {
  CHECK(type_of("skip", sort3()) == StType::c());
  CHECK(to_string(type_of("<swap12, skip>", sort3())) == "C * C");
  TypingCtx n{{"n", StType::d()}};
  CHECK(to_string(type_of("while[z. comp(z)](fun x -> fun (y : C) -> swap x, fun x -> fun (y : C) -> skip, "
                          "fun (y : C) -> skip, n)",
                          ins(), n)) == "C -> C");
  CHECK(to_string(type_of("add", ins())) == "D * D -> D");
  CHECK(to_string(type_of("(swap12 * 1)", sort3())) == "D");
  CHECK_THROWS_AS(type_of("if x <= 2 then skip else swap12", sort3()), TypeError);
  CHECK_THROWS_AS(type_of("if 1 <= 2 then skip else 1", sort3()), TypeError);
  CHECK_THROWS_AS(type_of("(skip * swap12) 1", sort3()), TypeError);
}

TEST_CASE("star") {
  CHECK(alpha_eq_st(star(StTerm::skip(), StTerm::skip()),
                    StTerm::p1(StTerm::comp(StTerm::skip(), StTerm::skip()))));
  CHECK(to_string(parse_st("p1(<swap12, swap23>)", sort3())) == "(swap12 * swap23)");
}

TEST_CASE("alpha equivalence of terms") {
  CHECK(alpha_eq_st(parse_st("fun x -> x", sort3()), parse_st("fun y -> y", sort3())));
  CHECK_FALSE(alpha_eq_st(StTerm::skip(), StTerm::default_of(StType::c())));
  CHECK_FALSE(alpha_eq_st(parse_st("fun x -> y", sort3()), parse_st("fun y -> y", sort3())));
}

TEST_CASE("unit simplification") {
  CHECK(simplify_units(StType::prod(StType::c(), StType::prod(StType::d(), StType::c()))) == StType::d());
  StType dd = StType::arrow(StType::d(), StType::d());
  CHECK(simplify_units(dd) == dd);
  StTerm t = parse_st("fun x -> fun (y : C) -> x", sort3());
  CHECK(alpha_eq_st(simplify_units(t, {}, sort3().st_env()), parse_st("fun x -> x", sort3())));
  StTerm p = parse_st("p1(<swap12, swap23>)", sort3());
  CHECK(to_string(simplify_units(p, {}, sort3().st_env())) == "(swap12 * swap23)");
}

TEST_CASE("simplification preserves typing") {
  const Theory& rw = hxtest::corpus("readwrite.slt").theory;
  for (const char* s : {"fun x -> ((write x * calc) * read)", "<calc, p0(read)>", "fun (u : C) -> <u, c>",
                        "elim(inl[C](c), fun x -> <x, skip>, fun (y : C) -> <c, y>)"}) {
    CAPTURE(s);
    StTerm t = parse_st(s, rw);
    StType ty = typecheck({}, t, rw.st_env());
    CHECK(typecheck({}, simplify_units(t, {}, rw.st_env()), rw.st_env()) == simplify_units(ty));
  }
}

TEST_CASE("term printing and JSON round-trip") {
  for (const char* s : {"fun x -> ((write x * calc) * read)", "elim(inl[C](c), fun x -> <x, skip>, fun (y : C) -> <c, y>)",
                        "default[D -> C * D]", "(fun (u : C) -> u) calc"}) {
    CAPTURE(s);
    const Theory& rw = hxtest::corpus("readwrite.slt").theory;
    StTerm t = parse_st(s, rw);
    CHECK(alpha_eq_st(parse_st(print_st(t), rw), t));
    CHECK(alpha_eq_st(st_from_json(to_json(t)), t));
  }
  for (const char* s : {"rec(skip, fun x -> fun (y : C) -> (fun n -> while[z. comp(z)](fun n -> fun (y : C) -> swap n, "
                        "fun n -> fun (y : C) -> skip, fun (y : C) -> skip, n) y) (succ x))",
                        "pred(add <3, 1>)", "if comp(2) /\\ ~sort(1) then swap 1 else skip"}) {
    CAPTURE(s);
    StTerm t = parse_st(s, ins());
    CHECK(alpha_eq_st(parse_st(print_st(t), ins()), t));
    CHECK(alpha_eq_st(st_from_json(to_json(t)), t));
  }
}

TEST_CASE("first-order terms as programs") {
  Term t = parse_term("add(x, succ(0))", ins());
  StTerm s = term_to_st(t);
  CHECK(to_string(s) == "add <x, succ 0>");
  REQUIRE(st_to_term(s).has_value());
  CHECK(*st_to_term(s) == t);
}
