#include "hx/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "hx/kernel.hpp"
#include "hx/print.hpp"

namespace hx {

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

Env env_bind(Env e, Ident name, Val v) {
  return std::make_shared<const EnvNode>(EnvNode{std::move(name), std::move(v), std::move(e)});
}

const Val* env_find(const Env& e, const Ident& name) {
  for (const EnvNode* n = e.get(); n; n = n->next.get())
    if (n->name == name) return &n->value;
  return nullptr;
}

namespace {
std::shared_ptr<Value> make(Value::Kind k) {
  auto v = std::make_shared<Value>();
  v->kind = k;
  return v;
}
}  // namespace

Val Value::nat(Nat n) {
  auto v = make(Kind::Nat);
  v->n = n;
  return v;
}

Val Value::unit() {
  static const Val u = make(Kind::Unit);
  return u;
}

Val Value::pair(Val a, Val b) {
  auto v = make(Kind::Pair);
  v->a = std::move(a);
  v->b = std::move(b);
  return v;
}

Val Value::sum(bool flag, Val a, Val b) {
  auto v = make(Kind::Sum);
  v->flag = flag;
  v->a = std::move(a);
  v->b = std::move(b);
  return v;
}

Val Value::closure(Env env, Ident param, StTerm body) {
  auto v = make(Kind::Closure);
  v->env = std::move(env);
  v->param = std::move(param);
  v->body = std::move(body);
  return v;
}

Val Value::native(NativeFn fn) {
  auto v = make(Kind::Native);
  v->fn = std::move(fn);
  return v;
}

nlohmann::json value_json(const Val& v) {
  switch (v->kind) {
    case Value::Kind::Nat: return v->n;
    case Value::Kind::Unit: return nullptr;
    case Value::Kind::Pair: return nlohmann::json::array({value_json(v->a), value_json(v->b)});
    case Value::Kind::Sum:
      return v->flag ? nlohmann::json{{"inr", value_json(v->b)}} : nlohmann::json{{"inl", value_json(v->a)}};
    case Value::Kind::Closure:
    case Value::Kind::Native: return "<fun>";
  }
  return nullptr;
}

nlohmann::json value_json_erased(const Val& v) {
  switch (v->kind) {
    case Value::Kind::Pair:
      if (v->b->kind == Value::Kind::Unit) return value_json_erased(v->a);
      if (v->a->kind == Value::Kind::Unit) return value_json_erased(v->b);
      return nlohmann::json::array({value_json_erased(v->a), value_json_erased(v->b)});
    case Value::Kind::Sum:
      return v->flag ? nlohmann::json{{"inr", value_json_erased(v->b)}}
                     : nlohmann::json{{"inl", value_json_erased(v->a)}};
    default: return value_json(v);
  }
}

std::string value_string(const Val& v) { return value_json(v).dump(); }

// ---------------------------------------------------------------------------
// Models
// ---------------------------------------------------------------------------

namespace {

struct Fnv {
  std::uint64_t h = 1469598103934665603ull;
  void byte(unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  }
  void str(const std::string& s) {
    for (unsigned char c : s) byte(c);
    byte(0xff);
  }
  void num(std::uint64_t x) {
    for (int i = 0; i < 8; ++i) byte(static_cast<unsigned char>(x >> (8 * i)));
  }
};

bool is_decimal(const Ident& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

std::optional<bool> StateModel::state_atom(const Ident&, std::span<const Nat>, const State&) const {
  return std::nullopt;
}
std::optional<bool> StateModel::main_atom(const Ident&, std::span<const Nat>) const { return std::nullopt; }
std::optional<Nat> StateModel::function(const Ident&, std::span<const Nat>) const { return std::nullopt; }

Outcome StateModel::interp_const(const Ident& c, State, Trace*) const {
  throw EvalError("model '" + name() + "' has no constant '" + c + "'");
}

Nat StateModel::sample_d(std::mt19937_64& rng) const { return rng() % 6; }

nlohmann::json StateModel::serialize(const State& s) const { return s; }

State StateModel::deserialize(const nlohmann::json& j) const {
  if (!j.is_array()) throw Error("model '" + name() + "' expects a JSON array state");
  State s;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw Error("state entries must be integers");
    s.push_back(x.get<std::int64_t>());
  }
  return s;
}

void StateModel::install(Theory&) const {}

bool StateModel::eval_state_atom(const Ident& p, std::span<const Nat> args, const State& s) const {
  if (auto r = state_atom(p, args, s)) return *r;
  Fnv f;
  f.str(p);
  for (Nat a : args) f.num(a);
  for (auto x : s) f.num(static_cast<std::uint64_t>(x));
  return (f.h >> 17) & 1;
}

bool StateModel::eval_main_atom(const Ident& p, std::span<const Nat> args) const {
  if (auto r = main_atom(p, args)) return *r;
  if (p == "eq" && args.size() == 2) return args[0] == args[1];
  Fnv f;
  f.str(p);
  for (Nat a : args) f.num(a);
  return (f.h >> 17) & 1;
}

Nat StateModel::interp_fun(const Ident& fn, std::span<const Nat> args) const {
  if (auto r = function(fn, args)) return *r;
  if (fn == "0" && args.empty()) return 0;
  if (fn == "succ" && args.size() == 1) return args[0] + 1;
  if (fn == "pred" && args.size() == 1) return args[0] == 0 ? 0 : args[0] - 1;
  if (fn == "add" && args.size() == 2) return args[0] + args[1];
  if (fn == "mul" && args.size() == 2) return args[0] * args[1];
  if (is_decimal(fn) && args.empty()) return std::stoull(fn);
  Fnv f;
  f.str(fn);
  for (Nat a : args) f.num(a);
  return (f.h >> 11) % 6;
}

std::vector<State> FreeModel::sample_states(std::uint64_t seed, std::size_t count) const {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<State> out;
  for (std::size_t i = 0; i < count; ++i) {
    State s(4);
    for (auto& x : s) x = static_cast<std::int64_t>(rng() % 4);
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

using SK = StTerm::Kind;

Nat as_nat(const Val& v, const char* where) {
  if (v->kind != Value::Kind::Nat) throw EvalError(std::string(where) + ": expected a natural number");
  return v->n;
}

std::vector<Nat> unpack_args(const Val& v, int n) {
  std::vector<Nat> out;
  Val cur = v;
  for (int i = 0; i + 1 < n; ++i) {
    if (cur->kind != Value::Kind::Pair) throw EvalError("function symbol argument is not a tuple");
    out.push_back(as_nat(cur->a, "function symbol argument"));
    cur = cur->b;
  }
  out.push_back(as_nat(cur, "function symbol argument"));
  return out;
}

int arity_of(const Ident& f, const EvalCtx& cx) {
  if (cx.sig) {
    auto it = cx.sig->functions.find(f);
    if (it != cx.sig->functions.end()) return it->second;
  }
  if (f == "succ" || f == "pred") return 1;
  if (f == "add" || f == "mul") return 2;
  return 0;
}

}  // namespace

Val default_value(const StType& t, const EvalCtx& cx) {
  switch (t.kind()) {
    case StType::Kind::D: {
      Ident c = cx.sig && !cx.sig->canonical_constant.empty() ? cx.sig->canonical_constant : "0";
      return Value::nat(cx.model->interp_fun(c, {}));
    }
    case StType::Kind::C: return Value::unit();
    case StType::Kind::Prod: return Value::pair(default_value(t.left(), cx), default_value(t.right(), cx));
    case StType::Kind::Sum: return Value::sum(false, default_value(t.left(), cx), default_value(t.right(), cx));
    case StType::Kind::Arrow: {
      Val r = default_value(t.right(), cx);
      return Value::native([r](const Val&, State s) { return Outcome{r, std::move(s)}; });
    }
  }
  return Value::unit();
}

Outcome apply(const Val& f, const Val& arg, State s, const EvalCtx& cx) {
  switch (f->kind) {
    case Value::Kind::Closure: return eval(env_bind(f->env, f->param, arg), *f->body, std::move(s), cx);
    case Value::Kind::Native: return f->fn(arg, std::move(s));
    default: throw EvalError("application of a non-function value");
  }
}

Nat eval_term(const Term& t, const Env& env, const EvalCtx& cx) {
  if (t.is_var()) {
    const Val* v = env_find(env, t.name());
    if (!v) throw EvalError("unbound variable '" + t.name() + "'");
    return as_nat(*v, "term variable");
  }
  std::vector<Nat> args;
  for (const auto& a : t.args()) args.push_back(eval_term(a, env, cx));
  return cx.model->interp_fun(t.name(), args);
}

bool eval_state_formula(const StateFormula& a, const Env& env, const State& s, const EvalCtx& cx) {
  using K = StateFormula::Kind;
  switch (a.kind()) {
    case K::Top: return true;
    case K::Bot: return false;
    case K::Atom: {
      std::vector<Nat> args;
      for (const auto& t : a.args()) args.push_back(eval_term(t, env, cx));
      return cx.model->eval_state_atom(a.pred(), args, s);
    }
    case K::And: return eval_state_formula(a.lhs(), env, s, cx) && eval_state_formula(a.rhs(), env, s, cx);
    case K::Or: return eval_state_formula(a.lhs(), env, s, cx) || eval_state_formula(a.rhs(), env, s, cx);
    case K::Imp: return !eval_state_formula(a.lhs(), env, s, cx) || eval_state_formula(a.rhs(), env, s, cx);
  }
  return false;
}

Outcome eval(const Env& env, const StTerm& t, State s, const EvalCtx& cx) {
  switch (t.kind()) {
    case SK::Skip: return {Value::unit(), std::move(s)};
    case SK::Default: return {default_value(t.type(), cx), std::move(s)};
    case SK::Const: return cx.model->interp_const(t.name(), std::move(s), cx.trace);
    case SK::Fun: {
      int n = arity_of(t.name(), cx);
      if (n == 0) return {Value::nat(cx.model->interp_fun(t.name(), {})), std::move(s)};
      Ident f = t.name();
      const StateModel* m = cx.model;
      return {Value::native([f, n, m](const Val& arg, State st) {
                return Outcome{Value::nat(m->interp_fun(f, unpack_args(arg, n))), std::move(st)};
              }),
              std::move(s)};
    }
    case SK::Var: {
      const Val* v = env_find(env, t.name());
      if (!v) throw EvalError("unbound variable '" + t.name() + "'");
      return {*v, std::move(s)};
    }
    case SK::P0:
    case SK::P1: {
      auto [v, s1] = eval(env, t.kid(0), std::move(s), cx);
      if (v->kind != Value::Kind::Pair) throw EvalError("projection of a non-pair");
      return {t.kind() == SK::P0 ? v->a : v->b, std::move(s1)};
    }
    case SK::Comp: {
      auto [a, s1] = eval(env, t.kid(0), std::move(s), cx);
      auto [b, s2] = eval(env, t.kid(1), std::move(s1), cx);
      return {Value::pair(a, b), std::move(s2)};
    }
    case SK::Inj0: {
      auto [a, s1] = eval(env, t.kid(0), std::move(s), cx);
      return {Value::sum(false, a, default_value(t.type(), cx)), std::move(s1)};
    }
    case SK::Inj1: {
      auto [b, s1] = eval(env, t.kid(0), std::move(s), cx);
      return {Value::sum(true, default_value(t.type(), cx), b), std::move(s1)};
    }
    case SK::Elim: {
      auto [r, s1] = eval(env, t.kid(0), std::move(s), cx);
      if (r->kind != Value::Kind::Sum) throw EvalError("case analysis on a non-sum");
      // Both branch functions are evaluated from π₁.
      auto [f, s2] = eval(env, t.kid(1), s1, cx);
      auto [g, s3] = eval(env, t.kid(2), std::move(s1), cx);
      return r->flag ? apply(g, r->b, std::move(s3), cx) : apply(f, r->a, std::move(s2), cx);
    }
    case SK::Lam: return {Value::closure(env, t.name(), t.kid(0)), std::move(s)};
    case SK::App: {
      auto [f, s1] = eval(env, t.kid(0), std::move(s), cx);
      auto [a, s2] = eval(env, t.kid(1), std::move(s1), cx);
      return apply(f, a, std::move(s2), cx);
    }
    case SK::Ite: {
      // Only the selected branch runs; both would start from π.
      bool c = eval_state_formula(t.cond(), env, s, cx);
      return eval(env, c ? t.kid(0) : t.kid(1), std::move(s), cx);
    }
    case SK::Rec: {
      auto [f, s1] = eval(env, t.kid(1), std::move(s), cx);
      StTerm base = t.kid(0);
      EvalCtx c = cx;
      Val fv = f;
      Val r = Value::native([env, base, fv, c](const Val& nv, State st) {
        Nat n = as_nat(nv, "recursor argument");
        auto [a, cur] = eval(env, base, std::move(st), c);
        for (Nat k = 0; k < n; ++k) {
          auto [g, s2] = apply(fv, Value::nat(k), std::move(cur), c);
          auto [a2, s3] = apply(g, a, std::move(s2), c);
          a = a2;
          cur = std::move(s3);
        }
        return Outcome{a, std::move(cur)};
      });
      return {r, std::move(s1)};
    }
    case SK::While: {
      auto [f, s1] = eval(env, t.kid(0), std::move(s), cx);
      auto [g, s2] = eval(env, t.kid(1), std::move(s1), cx);
      auto [h, s3] = eval(env, t.kid(2), std::move(s2), cx);
      auto [mv, s4] = eval(env, t.kid(3), std::move(s3), cx);
      Nat m = as_nat(mv, "loop counter");
      Ident hole = t.name();
      StateFormula cond = t.cond();
      EvalCtx c = cx;
      Val loop = Value::native([=](const Val& y0, State st) {
        Val y = y0;
        for (Nat k = m; k > 0; --k) {
          if (eval_state_formula(cond, env_bind(env, hole, Value::nat(k)), st, c)) {
            auto [a, st1] = apply(f, Value::nat(k - 1), std::move(st), c);
            auto [y2, st2] = apply(a, y, std::move(st1), c);
            y = y2;
            st = std::move(st2);
          } else {
            auto [b, st1] = apply(g, Value::nat(k - 1), std::move(st), c);
            return apply(b, y, std::move(st1), c);
          }
        }
        return apply(h, y, std::move(st), c);
      });
      return {loop, std::move(s4)};
    }
  }
  throw EvalError("unknown term");
}

Val random_value(const StType& t, std::mt19937_64& rng, const EvalCtx& cx) {
  switch (t.kind()) {
    case StType::Kind::D: return Value::nat(cx.model->sample_d(rng));
    case StType::Kind::C: return Value::unit();
    case StType::Kind::Prod: {
      Val a = random_value(t.left(), rng, cx);
      return Value::pair(a, random_value(t.right(), rng, cx));
    }
    case StType::Kind::Sum: {
      bool flag = rng() & 1;
      Val a = random_value(t.left(), rng, cx);
      return Value::sum(flag, a, random_value(t.right(), rng, cx));
    }
    case StType::Kind::Arrow: {
      Val r = random_value(t.right(), rng, cx);
      return Value::native([r](const Val&, State s) { return Outcome{r, std::move(s)}; });
    }
  }
  return Value::unit();
}

bool value_equal(const Val& a, const Val& b, const StType& t, const std::vector<State>& states, const EvalCtx& cx,
                 std::mt19937_64& rng) {
  switch (t.kind()) {
    case StType::Kind::D: return a->kind == Value::Kind::Nat && b->kind == Value::Kind::Nat && a->n == b->n;
    case StType::Kind::C: return true;
    case StType::Kind::Prod:
      return value_equal(a->a, b->a, t.left(), states, cx, rng) && value_equal(a->b, b->b, t.right(), states, cx, rng);
    case StType::Kind::Sum:
      if (a->flag != b->flag) return false;
      return a->flag ? value_equal(a->b, b->b, t.right(), states, cx, rng)
                     : value_equal(a->a, b->a, t.left(), states, cx, rng);
    case StType::Kind::Arrow: {
      std::vector<Val> probes{default_value(t.left(), cx), random_value(t.left(), rng, cx)};
      for (const auto& p : probes)
        for (const auto& s : states) {
          auto [ra, sa] = apply(a, p, s, cx);
          auto [rb, sb] = apply(b, p, s, cx);
          if (sa != sb || !value_equal(ra, rb, t.right(), {sa}, cx, rng)) return false;
        }
      return true;
    }
  }
  return false;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Realizability
// ---------------------------------------------------------------------------

namespace {

nlohmann::json env_json(const Env& env) {
  nlohmann::json j = nlohmann::json::object();
  for (const EnvNode* n = env.get(); n; n = n->next.get())
    if (!j.contains(n->name)) j[n->name] = value_json(n->value);
  return j;
}

class Tester {
 public:
  Tester(const Theory& th, const StateModel& m, const Budget& b, std::uint64_t seed)
      : th_(th), m_(m), b_(b), rng_(seed) {
    cx_.model = &m;
    cx_.sig = &th.sig;
  }

  const EvalCtx& cx() const { return cx_; }
  std::mt19937_64& rng() { return rng_; }

  std::string why;
  nlohmann::json cex;
  std::size_t checked = 0;

  std::vector<State> satisfying(const StateFormula& a, const Env& env, std::size_t count) {
    std::vector<State> out;
    std::uint64_t seed = rng_();
    std::vector<State> pool = m_.sample_states(seed, count * 40);
    for (auto& s : pool) {
      if (out.size() >= count) break;
      if (eval_state_formula(a, env, s, cx_)) out.push_back(std::move(s));
    }
    return out;
  }

  std::vector<Nat> d_samples() {
    std::vector<Nat> out{as_nat(default_value(StType::d(), cx_), "canonical constant")};
    const std::size_t want = scaled(b_.d_samples, 2);
    for (std::size_t tries = 0; out.size() < want && tries < 8 * want; ++tries) {
      Nat n = tries < 2 ? tries : m_.sample_d(rng_);
      if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    }
    return out;
  }

  std::vector<Val> hypotheses(const MainFormula& a, const Env& env) {
    StType t = real_type(a);
    std::vector<Val> cand{default_value(t, cx_)};
    for (std::size_t i = 0, n = scaled(b_.hyp_samples, 1); i < n; ++i) cand.push_back(random_value(t, rng_, cx_));
    std::vector<Val> out;
    ++quiet_;
    for (const auto& v : cand)
      if (sr(v, a, env)) out.push_back(v);
    --quiet_;
    return out;
  }

  bool sr(const Val& v, const MainFormula& a, const Env& env) {
    using K = MainFormula::Kind;
    switch (a.kind()) {
      case K::Top: return true;
      case K::Bot: return note("a realizer of falsity was demanded", a, env);
      case K::Atom: {
        std::vector<Nat> args;
        for (const auto& t : a.args()) args.push_back(eval_term(t, env, cx_));
        return m_.eval_main_atom(a.pred(), args) || note("atom is false", a, env);
      }
      case K::And:
        if (v->kind != Value::Kind::Pair) return note("realizer of a conjunction is not a pair", a, env);
        return sr(v->a, a.lhs(), env) && sr(v->b, a.rhs(), env);
      case K::Or:
        if (v->kind != Value::Kind::Sum) return note("realizer of a disjunction is not tagged", a, env);
        return v->flag ? sr(v->b, a.rhs(), env) : sr(v->a, a.lhs(), env);
      case K::Exists:
        if (v->kind != Value::Kind::Pair || v->a->kind != Value::Kind::Nat)
          return note("realizer of an existential is not a witness pair", a, env);
        return sr(v->b, a.body(), env_bind(env, a.var(), v->a));
      case K::ImpTriple: {
        Deeper d(depth_);
        for (const auto& h : hypotheses(a.antecedent(), env)) {
          auto run = [&](State s) { return apply(v, h, std::move(s), cx_); };
          if (!triple(run, a.triple(), env, scaled(b_.nested_states, 1), nullptr)) return false;
        }
        return true;
      }
      case K::ForallTriple: {
        Deeper d(depth_);
        for (Nat n : d_samples()) {
          auto run = [&](State s) { return apply(v, Value::nat(n), std::move(s), cx_); };
          if (!triple(run, a.triple(), env_bind(env, a.var(), Value::nat(n)), scaled(b_.nested_states, 1), nullptr))
            return false;
        }
        return true;
      }
    }
    return false;
  }

  /// sr run ⟨α⟩A⟨β⟩ over sampled states; `found` counts states meeting α.
  template <class Run>
  bool triple(Run&& run, const Triple& t, const Env& env, std::size_t count, std::size_t* found) {
    std::vector<State> states = satisfying(t.pre, env, count);
    if (found) *found += states.size();
    for (const auto& s : states) {
      if (!quiet_) ++checked;
      Outcome o;
      try {
        o = run(s);
      } catch (const EvalError& e) {
        return fail_state(std::string("evaluation error: ") + e.what(), t, env, s, nullptr);
      }
      if (!sr(o.first, t.body, env)) return fail_state(why.empty() ? "body not realized" : why, t, env, s, &o);
      if (!eval_state_formula(t.post, env, o.second, cx_))
        return fail_state("postcondition " + to_string(t.post) + " does not hold", t, env, s, &o);
    }
    return true;
  }

 private:
  const Theory& th_;
  const StateModel& m_;
  Budget b_;
  std::mt19937_64 rng_;
  EvalCtx cx_;
  int quiet_ = 0;
  // Nesting depth of the formula being tested; budgets halve per level past the first.
  int depth_ = 0;

  struct Deeper {
    int& depth;
    explicit Deeper(int& d) : depth(d) { ++depth; }
    ~Deeper() { --depth; }
  };

  std::size_t scaled(std::size_t n, std::size_t floor) const {
    int shift = std::max(0, depth_ - 1);
    return std::max(floor, shift >= 16 ? 0 : n >> shift);
  }

  bool note(const std::string& msg, const MainFormula& a, const Env& env) {
    if (!quiet_ && why.empty()) why = msg + ": " + to_string(a) + " with " + env_json(env).dump();
    return false;
  }

  bool fail_state(const std::string& msg, const Triple& t, const Env& env, const State& s, const Outcome* o) {
    if (quiet_) return false;
    if (cex.is_null()) {
      cex = {{"triple", to_string(t)}, {"state", m_.serialize(s)}, {"variables", env_json(env)}};
      if (o) {
        cex["value"] = value_json(o->first);
        cex["final_state"] = m_.serialize(o->second);
      }
      if (why.empty()) why = msg;
    }
    return false;
  }
};

}  // namespace

RealizeReport check_realizes(const StTerm& t, const Triple& goal, const Theory& th, const StateModel& m,
                             const Budget& b, const Context& ctx) {
  Tester tester(th, m, b, b.seed * 0x2545f4914f6cdd1dull + 17);
  RealizeReport rep;
  TypingCtx hyp = real_context(ctx);
  VarSet vars = free_vars(goal);
  for (const auto& h : ctx.entries()) collect_free_vars(h.formula, vars);
  for (const auto& v : free_vars(t))
    if (!hyp.count(v)) vars.insert(v);

  std::size_t found = 0;
  std::size_t rounds = vars.empty() ? 1 : std::max<std::size_t>(1, b.d_samples);
  std::size_t per_round = std::max<std::size_t>(1, b.states / rounds);
  bool no_hyp_realizer = false;
  for (std::size_t r = 0; r < rounds; ++r) {
    Env env;
    for (const auto& v : vars) {
      Nat n = r == 0 ? as_nat(default_value(StType::d(), tester.cx()), "canonical constant")
                     : m.sample_d(tester.rng());
      env = env_bind(env, v, Value::nat(n));
    }
    bool ok_hyps = true;
    for (const auto& h : ctx.entries()) {
      auto hs = tester.hypotheses(h.formula, env);
      if (hs.empty()) {
        ok_hyps = false;
        break;
      }
      env = env_bind(env, realizer_var(h.label), hs.front());
    }
    if (!ok_hyps) {
      no_hyp_realizer = true;
      continue;
    }
    auto run = [&](State s) { return eval(env, t, std::move(s), tester.cx()); };
    if (!tester.triple(run, goal, env, per_round, &found)) {
      rep.verdict = Verdict::Fail;
      rep.detail = tester.why;
      rep.counterexample = tester.cex;
      rep.states_checked = tester.checked;
      return rep;
    }
  }
  rep.states_checked = tester.checked;
  if (found == 0) {
    rep.verdict = Verdict::Inconclusive;
    rep.detail = no_hyp_realizer ? "no sampled realizer satisfies the hypotheses"
                                 : "no sampled state satisfies the precondition " + to_string(goal.pre);
  }
  return rep;
}

bool realizes_value(const Val& v, const MainFormula& a, const Env& env, const Theory& th, const StateModel& m,
                    const Budget& b, std::mt19937_64& rng) {
  Tester tester(th, m, b, rng());
  return tester.sr(v, a, env);
}

RealizeReport currying_check(const CurryInstance& c, const Theory& th, const StateModel& m,
                             const std::vector<State>& states, std::uint64_t seed) {
  EvalCtx cx{&m, &th.sig, nullptr};
  std::mt19937_64 rng(seed);
  RealizeReport rep;
  StType pair = StType::prod(c.tx, c.ty);
  StTerm body = StTerm::lam(c.x, c.tx, StTerm::lam(c.y, c.ty, c.t));
  VarSet avoid = free_vars(c.t);
  avoid.insert(c.x);
  avoid.insert(c.y);
  Ident v = fresh_name("v", avoid);
  StTerm lhs = StTerm::app(
      StTerm::lam(v, pair, StTerm::app(StTerm::app(body, StTerm::p0(StTerm::var(v))), StTerm::p1(StTerm::var(v)))),
      c.s);
  TypingCtx tctx{{c.x, c.tx}, {c.y, c.ty}};
  StType result = typecheck(tctx, c.t, th.st_env());
  if (!(typecheck({}, c.s, th.st_env()) == pair)) throw TypeError("currying check: argument is not of the pair type");
  for (const auto& s : states) {
    ++rep.states_checked;
    auto [l, ls] = eval({}, lhs, s, cx);
    auto [ab, s1] = eval({}, c.s, s, cx);
    Env env = env_bind(env_bind({}, c.x, ab->a), c.y, ab->b);
    auto [r, rs] = eval(env, c.t, s1, cx);
    if (ls != rs || !value_equal(l, r, result, {ls}, cx, rng)) {
      rep.verdict = Verdict::Fail;
      rep.detail = "curried and direct evaluation differ";
      rep.counterexample = {{"state", m.serialize(s)}, {"curried", value_json(l)}, {"direct", value_json(r)},
                            {"curried_state", m.serialize(ls)}, {"direct_state", m.serialize(rs)}};
      return rep;
    }
  }
  return rep;
}

std::string embed_main_formula(const MainFormula& a, Notation n) {
  bool u = n == Notation::Unicode;
  const std::string imp = u ? " ⟹ " : " => ";
  const std::string ex = u ? "∃" : "ex ";
  const std::string all = u ? "∀" : "all ";
  const std::string pi = u ? "π" : "pi";
  const std::string pi2 = u ? "π′" : "pi'";
  auto triple = [&](const Triple& t, auto&& self) -> std::string {
    return ex + pi + ". [" + to_string(t.pre, n) + "](" + pi + ")" + imp + self(t.body, self) + (u ? " ∧ " : " /\\ ") +
           ex + pi2 + ". [" + to_string(t.post, n) + "](" + pi2 + ")";
  };
  auto go = [&](const MainFormula& f, auto&& self) -> std::string {
    using K = MainFormula::Kind;
    switch (f.kind()) {
      case K::Top:
      case K::Bot:
      case K::Atom: return to_string(f, n);
      case K::And: return "(" + self(f.lhs(), self) + (u ? " ∧ " : " /\\ ") + self(f.rhs(), self) + ")";
      case K::Or: return "(" + self(f.lhs(), self) + (u ? " ∨ " : " \\/ ") + self(f.rhs(), self) + ")";
      case K::Exists: return ex + f.var() + ". " + self(f.body(), self);
      case K::ImpTriple: return "(" + self(f.antecedent(), self) + imp + "(" + triple(f.triple(), self) + "))";
      case K::ForallTriple: return all + f.var() + ". (" + triple(f.triple(), self) + ")";
    }
    return "";
  };
  return go(a, go);
}

}  // namespace hx
