#include <doctest.h>

#include <functional>
#include <random>

#include "hx/parse.hpp"
#include "hx/state_logic.hpp"
#include "hx/tt_kernel.hpp"
#include "support.hpp"

using namespace hx;

namespace {

const Theory& sort3() { return hxtest::corpus("sort3.slt").theory; }
const Theory& ins() { return hxtest::corpus("insertion_sort.slt").theory; }

const HAxiomSchema& schema(const Theory& th, const std::string& name) {
  for (const auto& a : th.haxioms)
    if (a.name == name) return a;
  throw Error("no schema " + name);
}

}  // namespace

TEST_CASE("axiom instantiation") {
  Binding b;
  b.insert_or_assign("l", parse_term("1", sort3()));
  b.insert_or_assign("l'", parse_term("2", sort3()));
  StateSequent tot = instantiate_haxiom(schema(sort3(), "totality"), b);
  CHECK(tot.hyps.empty());
  CHECK(tot.goal == parse_state_formula("1 <= 2 \\/ 2 <= 1", sort3()));

  StateSequent s = instantiate_haxiom(schema(sort3(), "sortedness"), {});
  CHECK(s == parse_state_sequent("1 <= 2, 2 <= 3 |- sorted", sort3()));

  Binding n;
  n.insert_or_assign("N", numeral(3));
  CHECK(instantiate_haxiom(schema(ins(), "extend"), n) == parse_state_sequent("sort(3) |- psort(4, 4)", ins()));

  Binding bad;
  bad.insert_or_assign("l", parse_term("1", sort3()));
  CHECK_THROWS_AS(instantiate_haxiom(schema(sort3(), "totality"), bad), Error);
}

TEST_CASE("check_h") {
  Document d = hxtest::doc_from("func x 0\nstatepred p 1\nstatepred q 1\n");
  CHECK(check_h(parse_state_sequent("|- p(x) \\/ ~p(x)", d.theory), {}));
  CHECK_FALSE(check_h(parse_state_sequent("p(x) |- q(x)", d.theory), {}));
  CHECK(check_h(parse_state_sequent("2 <= 3, 1 <= 2, 1 <= 3 |- sorted", sort3()), sort3().haxioms));
  CHECK(check_h(parse_state_sequent("|- 2 <= 1 \\/ 1 <= 2", sort3()), sort3().haxioms));
  CHECK_FALSE(check_h(parse_state_sequent("|- sorted", sort3()), {}));
  CHECK_THROWS_AS(check_h_or_fail(parse_state_sequent("|- sorted", sort3()), {}), UnprovableSequent);
  CHECK(check_h(parse_state_sequent("~comp(n), psort(n, N) |- sort(N)", ins()), ins().haxioms));
}

TEST_CASE("hints supply instances automatic matching cannot find") {
  StateSequent seq = parse_state_sequent("|- sort(0) /\\ (sort(5) -> psort(6, 6))", ins());
  StateLogicOptions manual;
  manual.automatic = false;
  CHECK_FALSE(check_h(seq, ins().haxioms, {}, manual));
  Binding n;
  n.insert_or_assign("N", numeral(5));
  CHECK(check_h(seq, ins().haxioms, {{"single", {}}, {"extend", n}}, manual));
}

TEST_CASE("location exchange") {
  StateFormula a = parse_state_formula("3 <= 2 /\\ 1 <= 2 /\\ 1 <= 3", sort3());
  StateFormula b = swap_locations(a, parse_term("2", sort3()), parse_term("3", sort3()));
  CHECK(b == parse_state_formula("2 <= 3 /\\ 1 <= 3 /\\ 1 <= 2", sort3()));
}

TEST_CASE("truth-table backends agree") {
  std::mt19937_64 rng(7);
  std::vector<tt::Backend> backends{tt::Backend::Scalar, tt::Backend::Bitsliced};
  if (tt::avx2_available()) backends.push_back(tt::Backend::Avx2);
  for (int i = 0; i < 300; ++i) {
    tt::Program p;
    p.num_atoms = 1 + static_cast<int>(rng() % 12);
    std::function<void(int)> gen = [&](int depth) {
      unsigned r = rng() % 6;
      if (depth == 0 || r < 2) {
        p.ops.push_back({tt::OpCode::Atom, static_cast<std::uint32_t>(rng() % p.num_atoms)});
      } else if (r == 2) {
        gen(depth - 1);
        p.ops.push_back({tt::OpCode::Not});
      } else {
        gen(depth - 1);
        gen(depth - 1);
        p.ops.push_back({r == 3 ? tt::OpCode::And : r == 4 ? tt::OpCode::Or : tt::OpCode::Imp});
      }
    };
    gen(6);
    p.finalize();
    auto want = tt::find_falsifying(p, tt::Backend::Scalar);
    for (auto b : backends) {
      CAPTURE(tt::backend_name(b));
      CHECK(tt::find_falsifying(p, b) == want);
    }
    if (want) CHECK_FALSE(tt::eval_scalar(p, *want));
  }
}

TEST_CASE("atom limit") {
  std::string lhs;
  for (int i = 0; i < 30; ++i) lhs += (i ? " /\\ " : "") + std::string("sort(") + std::to_string(i) + ")";
  StateLogicOptions small;
  small.atom_limit = 10;
  CHECK_THROWS_AS(check_h(parse_state_sequent(lhs + " |- sort(1)", ins()), {}, {}, small), ResourceError);
}
