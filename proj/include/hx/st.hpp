#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hx/print.hpp"
#include "hx/syntax.hpp"

namespace hx {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

class StType {
 public:
  enum class Kind { D, C, Prod, Sum, Arrow };

  static StType d();
  static StType c();
  static StType prod(StType l, StType r);
  static StType sum(StType l, StType r);
  static StType arrow(StType a, StType b);

  Kind kind() const;
  const StType& left() const;
  const StType& right() const;

  bool operator==(const StType& o) const;

 private:
  struct Node;
  explicit StType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

class StTerm {
 public:
  enum class Kind {
    Skip, Default, Const, Fun, Var, P0, P1, Comp, Inj0, Inj1, Elim, Lam, App, Ite, Rec, While
  };

  static StTerm skip();
  static StTerm default_of(StType t);
  static StTerm constant(Ident name);
  static StTerm fun(Ident symbol);
  static StTerm var(Ident name);
  static StTerm p0(StTerm t);
  static StTerm p1(StTerm t);
  static StTerm comp(StTerm s, StTerm t);
  /// ι0(t) : X+Y where `other` is Y.
  static StTerm inj0(StTerm t, StType other);
  /// ι1(t) : X+Y where `other` is X.
  static StTerm inj1(StTerm t, StType other);
  static StTerm elim(StTerm r, StTerm s, StTerm t);
  static StTerm lam(Ident x, StType param, StTerm body);
  static StTerm app(StTerm f, StTerm a);
  static StTerm ite(StateFormula cond, StTerm s, StTerm t);
  static StTerm rec(StTerm s, StTerm t);
  /// while γ[z](r, s, t, u); z is a placeholder, not a binder of the term.
  static StTerm while_loop(Ident hole, StateFormula cond, StTerm r, StTerm s, StTerm t, StTerm u);

  Kind kind() const;
  /// Var / Const / Fun name, Lam parameter, While hole.
  const Ident& name() const;
  /// Default type, Lam parameter type, Inj other type.
  const StType& type() const;
  const StateFormula& cond() const;
  /// Children in constructor order.
  const std::vector<StTerm>& kids() const;
  const StTerm& kid(std::size_t i) const { return kids()[i]; }

  bool same_node(const StTerm& o) const { return node_ == o.node_; }

 private:
  struct Node;
  explicit StTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// s ∗ t := p1(s ∘ t)
StTerm star(StTerm s, StTerm t);

/// Natural interpretation of an SL term: x ↦ x, f(t1..tn) ↦ f (t1 ∘ ... ∘ tn).
StTerm term_to_st(const Term& t);
/// Inverse of term_to_st where possible.
std::optional<Term> st_to_term(const StTerm& t);

// ---------------------------------------------------------------------------
// Typing
// ---------------------------------------------------------------------------

using TypingCtx = std::map<Ident, StType>;

/// Typing environment: the signature (function arities) and Λ_S constant types.
struct StEnv {
  const Signature* sig = nullptr;
  std::map<Ident, StType> constants;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

/// D^n → D with the n-fold product nested to the right; D when n = 0.
StType function_symbol_type(int arity);

StType typecheck(const TypingCtx& ctx, const StTerm& t, const StEnv& env);

VarSet free_vars(const StTerm& t);
/// Capture-avoiding; throws if `x` occurs in a state condition and `by` is not an SL term.
StTerm subst(const StTerm& t, const Ident& x, const StTerm& by);

bool alpha_eq_st(const StTerm& a, const StTerm& b);

// ---------------------------------------------------------------------------
// Unit simplification (display only)
// ---------------------------------------------------------------------------

StType simplify_units(const StType& t);
/// Term-level ≃ normal form; ctx gives the original types of free variables.
StTerm simplify_units(const StTerm& t, const TypingCtx& ctx, const StEnv& env);

// ---------------------------------------------------------------------------
// Printing and serialization
// ---------------------------------------------------------------------------

struct StPrintOptions {
  Notation notation = Notation::Ascii;
  bool show_types = false;
};

std::string to_string(const StType& t, Notation n = Notation::Ascii);
std::string to_string(const StTerm& t, const StPrintOptions& o = {});

nlohmann::json to_json(const Term& t);
nlohmann::json to_json(const StateFormula& a);
nlohmann::json to_json(const StType& t);
nlohmann::json to_json(const StTerm& t);
Term term_from_json(const nlohmann::json& j);
StateFormula state_formula_from_json(const nlohmann::json& j);
StType type_from_json(const nlohmann::json& j);
StTerm st_from_json(const nlohmann::json& j);

}  // namespace hx
