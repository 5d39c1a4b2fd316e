#include "hx/models.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

namespace hx {

namespace {

void log(Trace* trace, const Ident& c, std::vector<Nat> args, const State& before, const State& after) {
  if (trace) trace->push_back(TraceEntry{c, std::move(args), before, after});
}

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t salt) { return std::mt19937_64(seed * 0x9e3779b97f4a7c15ull + salt); }

State array_state(const nlohmann::json& j, std::size_t n, const std::string& model) {
  if (!j.is_array()) throw Error("model '" + model + "' expects a JSON array state");
  State s(n, 0);
  if (j.size() > n) throw Error("model '" + model + "' holds at most " + std::to_string(n) + " cells");
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer() || j[i].get<std::int64_t>() < 0)
      throw Error("state entries must be natural numbers");
    s[i] = j[i].get<std::int64_t>();
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Query-solve: [query present, query, answer present, input, output]
// ---------------------------------------------------------------------------

QuerySolveModel::QuerySolveModel(std::function<Nat(Nat)> g) : g_(std::move(g)) {}

State QuerySolveModel::empty() { return State(5, 0); }

std::optional<bool> QuerySolveModel::state_atom(const Ident& p, std::span<const Nat> args, const State& s) const {
  if (p == "stored" && args.size() == 1) return s[0] != 0 && static_cast<Nat>(s[1]) == args[0];
  if (p == "solved" && args.size() == 1) return s[2] != 0 && static_cast<Nat>(s[3]) == args[0];
  return std::nullopt;
}

std::optional<bool> QuerySolveModel::main_atom(const Ident& p, std::span<const Nat> args) const {
  if (p == "P" && args.size() == 2) return args[1] == g_(args[0]);
  return std::nullopt;
}

Outcome QuerySolveModel::interp_const(const Ident& c, State s, Trace* trace) const {
  if (c == "write") {
    return {Value::native([trace](const Val& x, State st) {
              if (x->kind != Value::Kind::Nat) throw EvalError("write expects a number");
              State before = st;
              st[0] = 1;
              st[1] = static_cast<std::int64_t>(x->n);
              log(trace, "write", {x->n}, before, st);
              return Outcome{Value::unit(), std::move(st)};
            }),
            std::move(s)};
  }
  if (c == "calc") {
    State before = s;
    if (s[0] != 0) {
      s[2] = 1;
      s[3] = s[1];
      s[4] = static_cast<std::int64_t>(g_(static_cast<Nat>(s[1])));
    }
    log(trace, "calc", {}, before, s);
    return {Value::unit(), std::move(s)};
  }
  if (c == "read") {
    Nat out = s[2] != 0 ? static_cast<Nat>(s[4]) : 0;
    return {Value::pair(Value::nat(out), Value::unit()), std::move(s)};
  }
  return StateModel::interp_const(c, std::move(s), trace);
}

std::vector<State> QuerySolveModel::sample_states(std::uint64_t seed, std::size_t count) const {
  auto rng = seeded(seed, 1);
  std::vector<State> out;
  for (std::size_t i = 0; i < count; ++i) {
    State s = empty();
    if (rng() & 1) {
      s[0] = 1;
      s[1] = static_cast<std::int64_t>(rng() % 6);
    }
    if (rng() & 1) {
      s[2] = 1;
      s[3] = static_cast<std::int64_t>(rng() % 6);
      s[4] = static_cast<std::int64_t>(g_(static_cast<Nat>(s[3])));
    }
    out.push_back(s);
  }
  return out;
}

nlohmann::json QuerySolveModel::serialize(const State& s) const {
  nlohmann::json j;
  j["query"] = s[0] ? nlohmann::json(s[1]) : nlohmann::json(nullptr);
  j["answer"] = s[2] ? nlohmann::json::array({s[3], s[4]}) : nlohmann::json(nullptr);
  return j;
}

namespace {
bool is_nat(const nlohmann::json& v) {
  return v.is_number_integer() && v.get<std::int64_t>() >= 0;
}
}  // namespace

State QuerySolveModel::deserialize(const nlohmann::json& j) const {
  if (!j.is_object()) throw Error("model 'query_solve' expects a JSON object state");
  State s = empty();
  for (const auto& [k, _] : j.items())
    if (k != "query" && k != "answer") throw Error("unknown query_solve state field '" + k + "'");
  if (j.contains("query") && !j["query"].is_null()) {
    if (!is_nat(j["query"])) throw Error("query must be a natural number");
    s[0] = 1;
    s[1] = j["query"].get<std::int64_t>();
  }
  if (j.contains("answer") && !j["answer"].is_null()) {
    const auto& a = j["answer"];
    if (!a.is_array() || a.size() != 2 || !is_nat(a[0]) || !is_nat(a[1]))
      throw Error("answer must be a pair of natural numbers");
    s[2] = 1;
    s[3] = a[0].get<std::int64_t>();
    s[4] = a[1].get<std::int64_t>();
  }
  return s;
}

// ---------------------------------------------------------------------------
// Swap3
// ---------------------------------------------------------------------------

std::optional<bool> Swap3Model::state_atom(const Ident& p, std::span<const Nat> args, const State& s) const {
  if (p == "le" && args.size() == 2) {
    if (args[0] < 1 || args[0] > 3 || args[1] < 1 || args[1] > 3) return false;
    return s[args[0] - 1] <= s[args[1] - 1];
  }
  if (p == "sorted" && args.empty()) return s[0] <= s[1] && s[1] <= s[2];
  return std::nullopt;
}

Outcome Swap3Model::interp_const(const Ident& c, State s, Trace* trace) const {
  static const std::map<Ident, std::pair<int, int>> swaps{{"swap12", {0, 1}}, {"swap13", {0, 2}}, {"swap23", {1, 2}}};
  auto it = swaps.find(c);
  if (it == swaps.end()) return StateModel::interp_const(c, std::move(s), trace);
  State before = s;
  std::swap(s[it->second.first], s[it->second.second]);
  log(trace, c, {}, before, s);
  return {Value::unit(), std::move(s)};
}

std::vector<State> Swap3Model::all_small_states() {
  std::vector<State> out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) out.push_back({a, b, c});
  return out;
}

std::vector<State> Swap3Model::sample_states(std::uint64_t seed, std::size_t count) const {
  // Every state over {0,1,2}, then the permutations of 1,2,3, then random draws.
  std::vector<State> out = all_small_states();
  State perm{1, 2, 3};
  do out.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  auto rng = seeded(seed, 2);
  while (out.size() < count) {
    State s(3);
    for (auto& x : s) x = static_cast<std::int64_t>(rng() % 4);
    out.push_back(std::move(s));
  }
  out.resize(count);
  return out;
}

Nat Swap3Model::sample_d(std::mt19937_64& rng) const { return 1 + rng() % 3; }

State Swap3Model::deserialize(const nlohmann::json& j) const {
  if (!j.is_array() || j.size() != 3) throw Error("model 'swap3' expects an array of three naturals");
  return array_state(j, 3, "swap3");
}

void Swap3Model::install(Theory& th) const {
  th.builders["swap_pair"] = [](const SAxiomBinding& b) -> StTerm {
    std::vector<Nat> locs;
    for (const auto& [_, t] : b.terms) {
      auto n = as_numeral(t);
      if (!n && !t.is_var() && t.args().empty() && !t.name().empty() &&
          std::all_of(t.name().begin(), t.name().end(), [](unsigned char ch) { return std::isdigit(ch); }))
        n = std::stoull(t.name());
      if (!n || *n < 1 || *n > 3) throw Error("swap_pair: location must be 1, 2 or 3");
      locs.push_back(*n);
    }
    if (locs.size() != 2) throw Error("swap_pair: expects two locations");
    if (locs[0] == locs[1]) return StTerm::skip();
    Nat a = std::min(locs[0], locs[1]), c = std::max(locs[0], locs[1]);
    return StTerm::constant("swap" + std::to_string(a) + std::to_string(c));
  };
}

// ---------------------------------------------------------------------------
// Insertion sort
// ---------------------------------------------------------------------------

InsertionSortModel::InsertionSortModel(std::size_t m) : m_(m) {
  if (m_ == 0) throw Error("insertion_sort model needs at least one cell");
}

bool InsertionSortModel::sorted_prefix(const State& s, Nat n) const {
  Nat last = std::min<Nat>(n, m_ - 1);
  for (Nat i = 1; i <= last; ++i)
    if (s[i - 1] > s[i]) return false;
  return true;
}

bool InsertionSortModel::psort(const State& s, Nat n, Nat big_n) const {
  if (n > big_n) return sorted_prefix(s, big_n);
  if (n == big_n) return big_n == 0 || sorted_prefix(s, big_n - 1);
  // n < N: the prefix 0..N without index n is sorted and a_n <= a_{n+1}.
  Nat last = std::min<Nat>(big_n, m_ - 1);
  std::int64_t prev = 0;
  bool have = false;
  for (Nat i = 0; i <= last; ++i) {
    if (i == n) continue;
    if (have && prev > s[i]) return false;
    prev = s[i];
    have = true;
  }
  return n + 1 >= m_ || s[n] <= s[n + 1];
}

bool InsertionSortModel::comp(const State& s, Nat n) const { return n == 0 || n >= m_ || s[n] <= s[n - 1]; }

std::optional<bool> InsertionSortModel::state_atom(const Ident& p, std::span<const Nat> args, const State& s) const {
  if (p == "sort" && args.size() == 1) return sorted_prefix(s, args[0]);
  if (p == "psort" && args.size() == 2) return psort(s, args[0], args[1]);
  if (p == "comp" && args.size() == 1) return comp(s, args[0]);
  return std::nullopt;
}

Outcome InsertionSortModel::interp_const(const Ident& c, State s, Trace* trace) const {
  if (c != "swap") return StateModel::interp_const(c, std::move(s), trace);
  std::size_t m = m_;
  return {Value::native([m, trace](const Val& n, State st) {
            if (n->kind != Value::Kind::Nat) throw EvalError("swap expects a number");
            State before = st;
            if (n->n + 1 < m) std::swap(st[n->n], st[n->n + 1]);
            log(trace, "swap", {n->n}, before, st);
            return Outcome{Value::unit(), std::move(st)};
          }),
          std::move(s)};
}

std::vector<State> InsertionSortModel::sample_states(std::uint64_t seed, std::size_t count) const {
  auto rng = seeded(seed, 3);
  std::vector<State> out;
  for (std::size_t i = 0; i < count; ++i) {
    State s(m_);
    int kind = static_cast<int>(rng() % 4);
    int range = kind == 3 ? 3 : 10;
    for (auto& x : s) x = static_cast<std::int64_t>(rng() % range);
    if (kind == 1 || kind == 2) {
      // A sorted prefix, optionally with one element displaced.
      std::size_t len = 1 + rng() % m_;
      std::sort(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(len));
      if (kind == 2 && len > 1) {
        std::size_t from = rng() % len, to = rng() % len;
        auto v = s[from];
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(from));
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(to), v);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

Nat InsertionSortModel::sample_d(std::mt19937_64& rng) const { return m_ >= 2 ? rng() % (m_ - 1) : 0; }

State InsertionSortModel::deserialize(const nlohmann::json& j) const { return array_state(j, m_, "insertion_sort"); }

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, ModelFactory>& registry() {
  static std::map<std::string, ModelFactory> r{
      {"free", [] { return std::make_shared<const FreeModel>(); }},
      {"query_solve", [] { return std::make_shared<const QuerySolveModel>(); }},
      {"swap3", [] { return std::make_shared<const Swap3Model>(); }},
      {"insertion_sort", [] { return std::make_shared<const InsertionSortModel>(16); }},
  };
  return r;
}

}  // namespace

void register_model(const std::string& name, ModelFactory f) {
  std::lock_guard lock(registry_mutex());
  registry()[name] = std::move(f);
}

std::shared_ptr<const StateModel> make_model(const std::string& name) {
  std::lock_guard lock(registry_mutex());
  auto it = registry().find(name);
  if (it == registry().end()) throw Error("unknown model '" + name + "'");
  return it->second();
}

std::vector<std::string> model_names() {
  std::lock_guard lock(registry_mutex());
  std::vector<std::string> out;
  for (const auto& [k, _] : registry()) out.push_back(k);
  return out;
}

std::shared_ptr<const StateModel> model_for(const Theory& th) { return make_model(th.model.empty() ? "free" : th.model); }

void attach_model(Theory& th, const StateModel& m) {
  th.model = m.name();
  m.install(th);
}

}  // namespace hx
