#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hx/st.hpp"
#include "hx/state_logic.hpp"
#include "hx/syntax.hpp"

namespace hx {

/// A state-formula metavariable of a main axiom schema.
struct FormulaMetaVar {
  enum class Shape { Any, Conj };

  Ident name;
  Shape shape = Shape::Any;
  /// Conj only: allowed atom predicates (empty = any) and argument terms (empty = any).
  std::vector<Ident> preds;
  std::vector<Term> arg_domain;
};

/// Post-condition computed as the location exchange of a formula metavariable.
struct SwapPost {
  Ident formula;
  Ident l, lp;
};

struct SAxiomBinding {
  Binding terms;
  std::map<Ident, StateFormula> formulas;
};

using RealizerBuilder = std::function<StTerm(const SAxiomBinding&)>;

/// A Δ_S family Γ ⊢_S {α} A {β}. Formula metavariables occur in the pattern as
/// nullary state atoms with the metavariable's name.
struct SAxiomSchema {
  Ident name;
  std::vector<MetaVar> term_metavars;
  std::vector<FormulaMetaVar> formula_metavars;
  Triple pattern;
  std::optional<SwapPost> swap_post;
  /// Realizer with the term metavariables free, or the name of a builder
  /// supplied by the attached model.
  std::optional<StTerm> realizer;
  Ident builder;
};

/// A defining equation lhs = rhs of a primitive recursive symbol.
struct DefEquation {
  Ident name;
  std::vector<Ident> vars;
  Term lhs, rhs;
};

class Theory {
 public:
  Signature sig;
  std::vector<HAxiomSchema> haxioms;
  std::vector<SAxiomSchema> saxioms;
  /// Λ_S constants with their types.
  std::map<Ident, StType> constants;
  std::vector<DefEquation> equations;
  /// Name of the semantic model, empty when none is attached.
  Ident model;
  std::map<Ident, RealizerBuilder> builders;
  StateLogicOptions hopts;

  /// Empty SL theory; callers declare at least one constant.
  static Theory predicate_logic();
  /// SA theory: arithmetic signature plus defining equations for add, mul, pred.
  static Theory arithmetic();

  StEnv st_env() const { return StEnv{&sig, constants}; }

  const SAxiomSchema& saxiom(const Ident& name) const;
  const DefEquation& equation(const Ident& name) const;
  bool has_saxiom(const Ident& name) const;

  void add_haxiom(HAxiomSchema s);
  /// Checks the realizer type against the schema body and rejects duplicates.
  void add_saxiom(SAxiomSchema s);
  void add_constant(const Ident& name, StType type);
};

/// Instantiates the triple; validates domains and formula shapes.
Triple instantiate_saxiom(const SAxiomSchema& s, const SAxiomBinding& b);
/// The realizer of an instance: the schema term with metavariables replaced,
/// or the builder's output.
StTerm saxiom_realizer(const Theory& th, const SAxiomSchema& s, const SAxiomBinding& b);

/// Realizability type: ⊤, ⊥, atoms ↦ C; ∧ ↦ ×; ∨ ↦ +; ∃ ↦ D × _; ⇒ ↦ →; ∀ ↦ D → _.
StType real_type(const MainFormula& a);

/// s = t as the SA equality atom.
MainFormula eq_formula(const Term& s, const Term& t);
/// Returns (s, t) if a is an equality atom.
std::optional<std::pair<Term, Term>> as_equation(const MainFormula& a);

}  // namespace hx
