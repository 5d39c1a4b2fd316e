#include <doctest.h>

#include "hx/models.hpp"
#include "support.hpp"

using namespace hx;

TEST_CASE("query-solve constants") {
  QuerySolveModel m;
  Trace tr;
  auto w = m.interp_const("write", QuerySolveModel::empty(), &tr).first;
  EvalCtx cx{&m, nullptr, &tr};
  State q = apply(w, Value::nat(5), QuerySolveModel::empty(), cx).second;
  CHECK(m.serialize(q) == nlohmann::json{{"query", 5}, {"answer", nullptr}});
  State a = m.interp_const("calc", q, nullptr).second;
  CHECK(m.serialize(a)["answer"] == nlohmann::json::array({5, 6}));
  auto [v, after] = m.interp_const("read", a, nullptr);
  CHECK(value_json(v->a) == 6);
  CHECK(after == a);
  CHECK(m.deserialize(m.serialize(a)) == a);
  CHECK(m.deserialize(nlohmann::json::object()) == QuerySolveModel::empty());
  REQUIRE(!tr.empty());
  CHECK(tr.back().constant == "write");
  CHECK(tr.back().args == std::vector<Nat>{5});
}

TEST_CASE("swap3") {
  Swap3Model m;
  CHECK(m.interp_const("swap12", State{3, 1, 2}, nullptr).second == State{1, 3, 2});
  CHECK(Swap3Model::all_small_states().size() == 27);
  auto first = m.sample_states(0, 33);
  CHECK(std::vector<State>(first.begin(), first.begin() + 27) == Swap3Model::all_small_states());
  CHECK_THROWS_AS(m.deserialize(nlohmann::json::array({1, 2})), Error);
  CHECK(m.eval_state_atom("sorted", {}, State{0, 1, 1}));
  std::vector<Nat> le23{2, 3};
  CHECK_FALSE(m.eval_state_atom("le", le23, State{1, 3, 2}));
}

TEST_CASE("insertion-sort predicates") {
  InsertionSortModel m;
  State s(16, 9);
  s[0] = 1;
  s[1] = 2;
  s[2] = 5;
  s[3] = 3;
  CHECK(m.sorted_prefix(s, 0));
  CHECK(m.sorted_prefix(s, 2));
  CHECK_FALSE(m.sorted_prefix(s, 3));
  CHECK(m.comp(s, 3));
  CHECK_FALSE(m.comp(s, 2));
  Trace tr;
  EvalCtx cx{&m, nullptr, &tr};
  auto swap = m.interp_const("swap", s, nullptr).first;
  State t = apply(swap, Value::nat(2), s, cx).second;
  CHECK(State(t.begin(), t.begin() + 4) == State{1, 2, 3, 5});
  for (const State& st : m.sample_states(11, 1000))
    for (Nat n = 0; n < 6; ++n)
      if (m.sorted_prefix(st, n)) CHECK(m.psort(st, n + 1, n + 1));
}

TEST_CASE("sort is downward closed") {
  // Exhaustive over small arrays with values in {0,1,2}.
  for (std::size_t size = 1; size <= 5; ++size) {
    InsertionSortModel m(size);
    State s(size, 0);
    for (;;) {
      for (Nat n = 0; n + 1 < size; ++n)
        if (m.sorted_prefix(s, n + 1)) CHECK(m.sorted_prefix(s, n));
      std::size_t i = 0;
      while (i < size && s[i] == 2) s[i++] = 0;
      if (i == size) break;
      ++s[i];
    }
  }
}

TEST_CASE("registry") {
  auto names = model_names();
  for (const char* n : {"free", "query_solve", "swap3", "insertion_sort"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  CHECK_THROWS_AS(make_model("nope"), Error);
  CHECK(model_for(hxtest::corpus("sort3.slt").theory)->name() == "swap3");
}
