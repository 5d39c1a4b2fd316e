#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hx/syntax.hpp"
#include "hx/tt_kernel.hpp"

namespace hx {

struct StateSequent {
  std::vector<StateFormula> hyps;
  StateFormula goal;

  bool operator==(const StateSequent& o) const = default;
};

using Binding = std::map<Ident, Term>;

struct MetaVar {
  Ident name;
  /// When non-empty the metavariable only ranges over these terms.
  std::vector<Term> domain;
};

/// A Δ_H family: hyps ⊢_H goal with term metavariables.
struct HAxiomSchema {
  Ident name;
  std::vector<MetaVar> metavars;
  std::vector<StateFormula> hyps;
  StateFormula goal;
};

struct AxiomHint {
  Ident schema;
  Binding binding;
};

struct StateLogicOptions {
  int atom_limit = 24;
  bool automatic = true;
  std::optional<tt::Backend> backend;  // default: fastest available
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

class UnprovableSequent : public Error {
 public:
  UnprovableSequent(StateSequent seq, std::string msg) : Error(std::move(msg)), sequent(std::move(seq)) {}
  StateSequent sequent;
};

/// Throws Error on unbound metavariables or a binding outside a declared domain.
StateSequent instantiate_haxiom(const HAxiomSchema& schema, const Binding& binding);

/// Every Δ_H instance the decision procedure will use for `seq`.
std::vector<StateSequent> collect_instances(const StateSequent& seq, const std::vector<HAxiomSchema>& axioms,
                                            const std::vector<AxiomHint>& hints,
                                            const StateLogicOptions& opts = {});

/// Classical validity of hyps ⊢ goal relative to the collected axiom instances.
bool check_h(const StateSequent& seq, const std::vector<HAxiomSchema>& axioms,
             const std::vector<AxiomHint>& hints = {}, const StateLogicOptions& opts = {});

/// Like check_h but throws UnprovableSequent naming the sequent.
void check_h_or_fail(const StateSequent& seq, const std::vector<HAxiomSchema>& axioms,
                     const std::vector<AxiomHint>& hints = {}, const StateLogicOptions& opts = {});

/// Distinct atoms of a formula in first-occurrence order.
void collect_atoms(const StateFormula& a, std::vector<StateFormula>& out);

/// Compiles `a` to a truth-table program; atoms are indexed by position in `atoms`.
tt::Program compile_formula(const StateFormula& a, const std::vector<StateFormula>& atoms);

/// Swap every occurrence of l and l' inside the arguments of atoms (the
/// location exchange α[l↔l']).
StateFormula swap_locations(const StateFormula& a, const Term& l, const Term& lp);

}  // namespace hx
