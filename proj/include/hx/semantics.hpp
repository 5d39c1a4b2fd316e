#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hx/st.hpp"
#include "hx/syntax.hpp"
#include "hx/theory.hpp"

namespace hx {

using Nat = std::uint64_t;
/// Concrete states are flat arrays; each model fixes the layout.
using State = std::vector<std::int64_t>;

// ---------------------------------------------------------------------------
// Values and environments
// ---------------------------------------------------------------------------

struct Value;
using Val = std::shared_ptr<const Value>;
using Outcome = std::pair<Val, State>;
using NativeFn = std::function<Outcome(const Val&, State)>;

struct EnvNode;
using Env = std::shared_ptr<const EnvNode>;

struct EnvNode {
  Ident name;
  Val value;
  Env next;
};

Env env_bind(Env e, Ident name, Val v);
const Val* env_find(const Env& e, const Ident& name);

struct Value {
  enum class Kind { Nat, Unit, Pair, Sum, Closure, Native };

  Kind kind = Kind::Unit;
  Nat n = 0;
  /// Sum: false for the left injection.
  bool flag = false;
  Val a, b;
  Env env;
  Ident param;
  std::optional<StTerm> body;
  NativeFn fn;

  static Val nat(Nat n);
  static Val unit();
  static Val pair(Val a, Val b);
  static Val sum(bool flag, Val a, Val b);
  static Val closure(Env env, Ident param, StTerm body);
  static Val native(NativeFn fn);
};

/// Nat / unit / pair / sum rendered as JSON; functions as "<fun>".
nlohmann::json value_json(const Val& v);
/// Same with unit components of pairs dropped (display form of run).
nlohmann::json value_json_erased(const Val& v);
std::string value_string(const Val& v);

class EvalError : public Error {
 public:
  using Error::Error;
};

struct TraceEntry {
  Ident constant;
  std::vector<Nat> args;
  State before, after;
};
using Trace = std::vector<TraceEntry>;

// ---------------------------------------------------------------------------
// State models
// ---------------------------------------------------------------------------

/// Semantics of a theory: concrete states, atoms, function symbols and the
/// Λ_S constants. Predicates a model does not define are interpreted by a
/// fixed hash so that opaque symbols still have a deterministic meaning.
class StateModel {
 public:
  virtual ~StateModel() = default;

  virtual std::string name() const = 0;

  /// Model-defined state predicates; nullopt when `p` is not one.
  virtual std::optional<bool> state_atom(const Ident& p, std::span<const Nat> args, const State& s) const;
  /// Model-defined main predicates.
  virtual std::optional<bool> main_atom(const Ident& p, std::span<const Nat> args) const;
  /// Model-defined function symbols.
  virtual std::optional<Nat> function(const Ident& f, std::span<const Nat> args) const;
  /// Semantics of a Λ_S constant: [c]π.
  virtual Outcome interp_const(const Ident& c, State s, Trace* trace) const;

  virtual std::vector<State> sample_states(std::uint64_t seed, std::size_t count) const = 0;
  /// A random element of D.
  virtual Nat sample_d(std::mt19937_64& rng) const;
  virtual nlohmann::json serialize(const State& s) const;
  virtual State deserialize(const nlohmann::json& j) const;
  /// Realizer builders referenced by main axioms ("by NAME").
  virtual void install(Theory& th) const;

  bool eval_state_atom(const Ident& p, std::span<const Nat> args, const State& s) const;
  bool eval_main_atom(const Ident& p, std::span<const Nat> args) const;
  /// Total: arithmetic symbols, decimal numerals, the model's own symbols,
  /// and a hash for anything else.
  Nat interp_fun(const Ident& f, std::span<const Nat> args) const;
};

/// The model used when a theory names none: a small integer array with every
/// predicate hash-interpreted.
class FreeModel : public StateModel {
 public:
  std::string name() const override { return "free"; }
  std::vector<State> sample_states(std::uint64_t seed, std::size_t count) const override;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct EvalCtx {
  const StateModel* model = nullptr;
  const Signature* sig = nullptr;
  Trace* trace = nullptr;
};

Outcome eval(const Env& env, const StTerm& t, State s, const EvalCtx& cx);
/// Applies a function value.
Outcome apply(const Val& f, const Val& arg, State s, const EvalCtx& cx);
/// 0_X
Val default_value(const StType& t, const EvalCtx& cx);

Nat eval_term(const Term& t, const Env& env, const EvalCtx& cx);
bool eval_state_formula(const StateFormula& a, const Env& env, const State& s, const EvalCtx& cx);

/// Structural equality; functions are compared by applying them to `probes`
/// from each of `states`.
bool value_equal(const Val& a, const Val& b, const StType& t, const std::vector<State>& states, const EvalCtx& cx,
                 std::mt19937_64& rng);

/// A random value of type t (functions are constant).
Val random_value(const StType& t, std::mt19937_64& rng, const EvalCtx& cx);

// ---------------------------------------------------------------------------
// Bounded realizability
// ---------------------------------------------------------------------------

struct Budget {
  std::size_t states = 100;
  std::size_t nested_states = 8;
  std::size_t d_samples = 6;
  std::size_t hyp_samples = 4;
  std::uint64_t seed = 0;
};

enum class Verdict { Pass, Fail, Inconclusive };
std::string verdict_name(Verdict v);

struct RealizeReport {
  Verdict verdict = Verdict::Pass;
  std::size_t states_checked = 0;
  std::string detail;
  nlohmann::json counterexample;
};

/// Tests sr [t] ⟨α⟩A⟨β⟩. Free variables of t and the goal outside `typing`
/// are sampled from D; variables in `typing` receive sampled realizers of
/// their hypotheses in `ctx`.
RealizeReport check_realizes(const StTerm& t, const Triple& goal, const Theory& th, const StateModel& m,
                             const Budget& b, const Context& ctx = {});
/// Tests sr v A for a closed value at fixed variable values.
bool realizes_value(const Val& v, const MainFormula& a, const Env& env, const Theory& th, const StateModel& m,
                    const Budget& b, std::mt19937_64& rng);

/// Compares (λ*v.t) s against t[a/x, b/y] run from π₁ where ⟨a,b,π₁⟩ = [s]π.
struct CurryInstance {
  StTerm t;
  Ident x, y;
  StType tx, ty;
  StTerm s;
};
RealizeReport currying_check(const CurryInstance& c, const Theory& th, const StateModel& m,
                             const std::vector<State>& states, std::uint64_t seed);

/// The metatheory reading of a main formula, as text.
std::string embed_main_formula(const MainFormula& a, Notation n = Notation::Unicode);

}  // namespace hx
