#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "hx/cli.hpp"
#include "support.hpp"

using namespace hx;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& f) { return hxtest::corpus_path(f).string(); }

}  // namespace

TEST_CASE("check") {
  Result r = cli({"check", corpus("readwrite.slp")});
  CHECK(r.code == 0);
  CHECK(r.out == "⊢_S ⟨β⟩∀x⟨α⟩∃y. P(x, y)⟨⊤⟩⟨β⟩ ok\n");
  CHECK(cli({"check", "examples/readwrite"}).out == r.out);
  Result all = cli({"check", corpus("insertion_sort.slp"), corpus("sort3.slp"), "--jobs", "3"});
  CHECK(all.code == 0);
  CHECK(all.out.find("insert: u: ⊤ ⊢_S ⟨sort(N)⟩⊤⟨sort(N + 1)⟩ ok\n") == 0);
  CHECK(all.out.find("sort3: ⊢_S ⟨⊤⟩⊤⟨sorted⟩ ok") != std::string::npos);
  CHECK(cli({"check", corpus("sort3.slp"), "--notation", "ascii"}).out.find("sort3: |- {true} true {sorted} ok") !=
        std::string::npos);
}

TEST_CASE("check failures") {
  Result missing = cli({"check", "no/such/file"});
  CHECK(missing.code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("extract") {
  Result r = cli({"extract", "examples/readwrite", "--cleanup-admin"});
  CHECK(r.code == 0);
  CHECK(r.out == "fun x -> ((write x * calc) * read)\n");
  CHECK(cli({"extract", "sort3"}).out ==
        "((if 2 <= 3 then skip else swap23) * (if 2 <= 1 then (swap12 * (if 2 <= 3 then skip else swap23)) else "
        "skip))\n");
  CHECK(cli({"extract", "sort3", "--notation", "unicode"}).out.find("∗") != std::string::npos);
  CHECK(cli({"extract", "pl", "--proof", "and_comm"}).out == "fun x_u -> <p1(x_u), p0(x_u)>\n");
  CHECK(cli({"extract", "pl"}).code == 2);
  CHECK(cli({"extract", "pl", "--proof", "nope"}).code == 2);
}

TEST_CASE("extract json round-trips") {
  for (const char* target : {"readwrite", "sort3", "insertion_sort"}) {
    CAPTURE(target);
    Result text = cli({"extract", target});
    Result js = cli({"extract", target, "--format", "json"});
    REQUIRE(js.code == 0);
    auto j = nlohmann::json::parse(js.out);
    CHECK(j["proof"] == target);
    const Document& d = hxtest::corpus(std::string(target) + ".slp");
    StTerm t = st_from_json(j["term"]);
    CHECK(to_string(t) + "\n" == text.out);
    CHECK(alpha_eq_st(parse_st(print_st(t), d.theory), t));
    CHECK(j.contains("type"));
  }
}

TEST_CASE("run") {
  Result s = cli({"run", "sort3", "--state", "[3,1,2]"});
  CHECK(s.code == 0);
  CHECK(nlohmann::json::parse(s.out)["state"] == nlohmann::json::array({1, 2, 3}));
  Result rw = cli({"run", "readwrite", "--args", "7", "--state", "{}"});
  CHECK(rw.code == 0);
  auto j = nlohmann::json::parse(rw.out);
  CHECK(j["value"] == 8);
  CHECK(j["state"]["answer"] == nlohmann::json::array({7, 8}));
  Result ins = cli({"run", "insertion_sort", "--args", "4", "--state", "[5,3,4,1,2,0,9,8,7,6,5,4,3,2,1,0]"});
  auto st = nlohmann::json::parse(ins.out)["state"];
  CHECK(st == nlohmann::json::array({1, 2, 3, 4, 5, 0, 9, 8, 7, 6, 5, 4, 3, 2, 1, 0}));
  Result tr = cli({"run", "sort3", "--state", "[3,2,1]", "--trace"});
  auto trace = nlohmann::json::parse(tr.out)["trace"];
  REQUIRE(trace.is_array());
  CHECK(trace.size() == 3);
  CHECK(trace[0]["before"] == nlohmann::json::array({3, 2, 1}));
  CHECK(cli({"run", "readwrite", "--args", "1", "2", "--state", "{}"}).code == 2);
  CHECK(cli({"run", "sort3", "--state", "[1,2"}).code == 2);
  CHECK(cli({"run", "sort3", "--state", "[1,2]"}).code == 2);
}

TEST_CASE("verify") {
  Result ok = cli({"verify", "sort3", "--samples", "27"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("sort3: pass (27 states checked)") == 0);
  CHECK(cli({"verify", "insertion_sort", "--samples", "200", "--seed", "1"}).code == 0);
  Result bad = cli({"verify", corpus("negative/broken_sort3.slp"), "--json"});
  CHECK(bad.code == 1);
  auto j = nlohmann::json::parse(bad.out);
  CHECK(j["verdict"] == "fail");
  CHECK(j["counterexample"].contains("state"));
}

TEST_CASE("seed from the environment") {
  ::setenv("HOARE_EXTRACT_SEED", "5", 1);
  CHECK(default_seed() == 5);
  Result r = cli({"verify", "sort3", "--json"});
  CHECK(nlohmann::json::parse(r.out)["seed"] == 5);
  ::setenv("HOARE_EXTRACT_SEED", "x", 1);
  CHECK(cli({"verify", "sort3"}).code == 2);
  ::unsetenv("HOARE_EXTRACT_SEED");
  CHECK(default_seed() == 0);
}
