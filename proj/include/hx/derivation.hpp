#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hx/state_logic.hpp"
#include "hx/syntax.hpp"
#include "hx/theory.hpp"

namespace hx {

enum class Rule {
  Hyp, TopAx, AndI, AndEL, AndER, OrIL, OrIR, OrE, ImpI, ImpE, BotE, ForallI, ForallE, ExistsI, ExistsE,
  Cons, Cond, SAxiom,
  EqRefl, EqSym, EqTrans, Ext, SuccNonzero, SuccInj, DefEq, Ind, While
};

/// Surface keyword of a rule, e.g. "and_I".
std::string rule_keyword(Rule r);

/// How a ⊢_H side condition is discharged: the oracle with automatic schema
/// instantiation, or only the listed instances.
struct HintSet {
  bool automatic = true;
  std::vector<AxiomHint> hints;
};

struct Span {
  int line = 0, col = 0, end_line = 0, end_col = 0;
  bool known() const { return line > 0; }
};

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

/// One node of a proof tree. Which fields are meaningful depends on the rule:
///
///   Hyp          label=u, sf=α
///   TopAx        sf=α
///   AndI         kids[2]          AndEL, AndER  kids[1]
///   OrIL         kids[1], mf=B    OrIR          mf=A, kids[1]
///   OrE          kids[3], label=u, label2=v
///   ImpI         label=u, mf=A, kids[1], sf=γ (outer)
///   ImpE         kids[2]
///   BotE         kids[1], mf=A, sf=γ
///   ForallI      var=x (binder), var2=y (eigenvariable), kids[1], sf=γ (outer)
///   ForallE      kids[1], term=t
///   ExistsI      var=x, mf=A, term=t, kids[1]
///   ExistsE      kids[2], var=y, label=u
///   Cons         sf=new pre, hints, kids[1], hints2, sf2=new post
///   Cond         sf=α, sf2=β (case formulas), hints, kids[2]
///   SAxiom       name, sax
///   EqRefl       term=t, sf=α     EqSym, SuccInj  kids[1]    EqTrans  kids[2]
///   Ext          var=x, mf=A(x), sf=γ(x), kids[2] (equation, body)
///   SuccNonzero  term=t, sf=α
///   DefEq        name, args, sf=α
///   Ind          var=x, label=u, mf=A(x), sf=γ (outer), kids[2] (base, step)
///   While        var=x, label=u, mf=A(x), var2=z, sf=γ(z), kids[3]
struct Derivation {
  Rule rule = Rule::TopAx;
  std::vector<DerivPtr> kids;
  Ident label, label2, var, var2, name;
  std::optional<StateFormula> sf, sf2;
  std::optional<MainFormula> mf;
  std::optional<Term> term;
  std::vector<Term> args;
  SAxiomBinding sax;
  HintSet hints, hints2;
  Span span;

  const Derivation& kid(std::size_t i) const { return *kids.at(i); }
};

// Constructors. Each returns a fresh node; the kernel computes conclusions.
namespace rules {
DerivPtr hyp(Ident u, StateFormula alpha = StateFormula::top());
DerivPtr top(StateFormula alpha);
DerivPtr and_i(DerivPtr d1, DerivPtr d2);
DerivPtr and_el(DerivPtr d);
DerivPtr and_er(DerivPtr d);
DerivPtr or_il(DerivPtr d, MainFormula b);
DerivPtr or_ir(MainFormula a, DerivPtr d);
DerivPtr or_e(DerivPtr d1, Ident u, DerivPtr d2, Ident v, DerivPtr d3);
DerivPtr imp_i(Ident u, MainFormula a, DerivPtr d, StateFormula gamma);
DerivPtr imp_e(DerivPtr d1, DerivPtr d2);
DerivPtr bot_e(DerivPtr d, MainFormula a, StateFormula gamma);
DerivPtr forall_i(Ident x, Ident y, DerivPtr d, StateFormula gamma);
DerivPtr forall_e(DerivPtr d, Term t);
DerivPtr exists_i(Ident x, MainFormula a, Term t, DerivPtr d);
DerivPtr exists_e(DerivPtr d1, Ident y, Ident u, DerivPtr d2);
DerivPtr cons(StateFormula pre, HintSet hpre, DerivPtr d, HintSet hpost, StateFormula post);
DerivPtr cond(StateFormula a, StateFormula b, HintSet h, DerivPtr d1, DerivPtr d2);
DerivPtr saxiom(Ident name, SAxiomBinding b);
DerivPtr eq_refl(Term t, StateFormula alpha);
DerivPtr eq_sym(DerivPtr d);
DerivPtr eq_trans(DerivPtr d1, DerivPtr d2);
DerivPtr ext(Ident x, MainFormula a, StateFormula gamma, DerivPtr d_eq, DerivPtr d_body);
DerivPtr succ_nonzero(Term t, StateFormula alpha);
DerivPtr succ_inj(DerivPtr d);
DerivPtr def_eq(Ident name, std::vector<Term> args, StateFormula alpha);
DerivPtr ind(Ident x, Ident u, MainFormula a, StateFormula gamma, DerivPtr base, DerivPtr step);
DerivPtr while_rule(Ident x, Ident u, MainFormula a, Ident z, StateFormula gamma, DerivPtr d1, DerivPtr d2,
                    DerivPtr d3);
}  // namespace rules

/// Number of nodes.
std::size_t derivation_size(const Derivation& d);

}  // namespace hx
