#include "hx/derivation.hpp"

namespace hx {

std::string rule_keyword(Rule r) {
  switch (r) {
    case Rule::Hyp: return "hyp";
    case Rule::TopAx: return "top";
    case Rule::AndI: return "and_I";
    case Rule::AndEL: return "and_EL";
    case Rule::AndER: return "and_ER";
    case Rule::OrIL: return "or_IL";
    case Rule::OrIR: return "or_IR";
    case Rule::OrE: return "or_E";
    case Rule::ImpI: return "imp_I";
    case Rule::ImpE: return "imp_E";
    case Rule::BotE: return "bot_E";
    case Rule::ForallI: return "forall_I";
    case Rule::ForallE: return "forall_E";
    case Rule::ExistsI: return "ex_I";
    case Rule::ExistsE: return "ex_E";
    case Rule::Cons: return "cons";
    case Rule::Cond: return "cond";
    case Rule::SAxiom: return "sax";
    case Rule::EqRefl: return "refl";
    case Rule::EqSym: return "sym";
    case Rule::EqTrans: return "trans";
    case Rule::Ext: return "ext";
    case Rule::SuccNonzero: return "succ_nz";
    case Rule::SuccInj: return "succ_inj";
    case Rule::DefEq: return "defeq";
    case Rule::Ind: return "ind";
    case Rule::While: return "while";
  }
  return "?";
}

namespace rules {

namespace {
std::shared_ptr<Derivation> node(Rule r, std::vector<DerivPtr> kids = {}) {
  auto d = std::make_shared<Derivation>();
  d->rule = r;
  d->kids = std::move(kids);
  return d;
}
}  // namespace

DerivPtr hyp(Ident u, StateFormula alpha) {
  auto d = node(Rule::Hyp);
  d->label = std::move(u);
  d->sf = std::move(alpha);
  return d;
}

DerivPtr top(StateFormula alpha) {
  auto d = node(Rule::TopAx);
  d->sf = std::move(alpha);
  return d;
}

DerivPtr and_i(DerivPtr d1, DerivPtr d2) { return node(Rule::AndI, {std::move(d1), std::move(d2)}); }
DerivPtr and_el(DerivPtr d) { return node(Rule::AndEL, {std::move(d)}); }
DerivPtr and_er(DerivPtr d) { return node(Rule::AndER, {std::move(d)}); }

DerivPtr or_il(DerivPtr d, MainFormula b) {
  auto n = node(Rule::OrIL, {std::move(d)});
  n->mf = std::move(b);
  return n;
}

DerivPtr or_ir(MainFormula a, DerivPtr d) {
  auto n = node(Rule::OrIR, {std::move(d)});
  n->mf = std::move(a);
  return n;
}

DerivPtr or_e(DerivPtr d1, Ident u, DerivPtr d2, Ident v, DerivPtr d3) {
  auto n = node(Rule::OrE, {std::move(d1), std::move(d2), std::move(d3)});
  n->label = std::move(u);
  n->label2 = std::move(v);
  return n;
}

DerivPtr imp_i(Ident u, MainFormula a, DerivPtr d, StateFormula gamma) {
  auto n = node(Rule::ImpI, {std::move(d)});
  n->label = std::move(u);
  n->mf = std::move(a);
  n->sf = std::move(gamma);
  return n;
}

DerivPtr imp_e(DerivPtr d1, DerivPtr d2) { return node(Rule::ImpE, {std::move(d1), std::move(d2)}); }

DerivPtr bot_e(DerivPtr d, MainFormula a, StateFormula gamma) {
  auto n = node(Rule::BotE, {std::move(d)});
  n->mf = std::move(a);
  n->sf = std::move(gamma);
  return n;
}

DerivPtr forall_i(Ident x, Ident y, DerivPtr d, StateFormula gamma) {
  auto n = node(Rule::ForallI, {std::move(d)});
  n->var = std::move(x);
  n->var2 = std::move(y);
  n->sf = std::move(gamma);
  return n;
}

DerivPtr forall_e(DerivPtr d, Term t) {
  auto n = node(Rule::ForallE, {std::move(d)});
  n->term = std::move(t);
  return n;
}

DerivPtr exists_i(Ident x, MainFormula a, Term t, DerivPtr d) {
  auto n = node(Rule::ExistsI, {std::move(d)});
  n->var = std::move(x);
  n->mf = std::move(a);
  n->term = std::move(t);
  return n;
}

DerivPtr exists_e(DerivPtr d1, Ident y, Ident u, DerivPtr d2) {
  auto n = node(Rule::ExistsE, {std::move(d1), std::move(d2)});
  n->var = std::move(y);
  n->label = std::move(u);
  return n;
}

DerivPtr cons(StateFormula pre, HintSet hpre, DerivPtr d, HintSet hpost, StateFormula post) {
  auto n = node(Rule::Cons, {std::move(d)});
  n->sf = std::move(pre);
  n->sf2 = std::move(post);
  n->hints = std::move(hpre);
  n->hints2 = std::move(hpost);
  return n;
}

DerivPtr cond(StateFormula a, StateFormula b, HintSet h, DerivPtr d1, DerivPtr d2) {
  auto n = node(Rule::Cond, {std::move(d1), std::move(d2)});
  n->sf = std::move(a);
  n->sf2 = std::move(b);
  n->hints = std::move(h);
  return n;
}

DerivPtr saxiom(Ident name, SAxiomBinding b) {
  auto n = node(Rule::SAxiom);
  n->name = std::move(name);
  n->sax = std::move(b);
  return n;
}

DerivPtr eq_refl(Term t, StateFormula alpha) {
  auto n = node(Rule::EqRefl);
  n->term = std::move(t);
  n->sf = std::move(alpha);
  return n;
}

DerivPtr eq_sym(DerivPtr d) { return node(Rule::EqSym, {std::move(d)}); }
DerivPtr eq_trans(DerivPtr d1, DerivPtr d2) { return node(Rule::EqTrans, {std::move(d1), std::move(d2)}); }

DerivPtr ext(Ident x, MainFormula a, StateFormula gamma, DerivPtr d_eq, DerivPtr d_body) {
  auto n = node(Rule::Ext, {std::move(d_eq), std::move(d_body)});
  n->var = std::move(x);
  n->mf = std::move(a);
  n->sf = std::move(gamma);
  return n;
}

DerivPtr succ_nonzero(Term t, StateFormula alpha) {
  auto n = node(Rule::SuccNonzero);
  n->term = std::move(t);
  n->sf = std::move(alpha);
  return n;
}

DerivPtr succ_inj(DerivPtr d) { return node(Rule::SuccInj, {std::move(d)}); }

DerivPtr def_eq(Ident name, std::vector<Term> args, StateFormula alpha) {
  auto n = node(Rule::DefEq);
  n->name = std::move(name);
  n->args = std::move(args);
  n->sf = std::move(alpha);
  return n;
}

DerivPtr ind(Ident x, Ident u, MainFormula a, StateFormula gamma, DerivPtr base, DerivPtr step) {
  auto n = node(Rule::Ind, {std::move(base), std::move(step)});
  n->var = std::move(x);
  n->label = std::move(u);
  n->mf = std::move(a);
  n->sf = std::move(gamma);
  return n;
}

DerivPtr while_rule(Ident x, Ident u, MainFormula a, Ident z, StateFormula gamma, DerivPtr d1, DerivPtr d2,
                    DerivPtr d3) {
  auto n = node(Rule::While, {std::move(d1), std::move(d2), std::move(d3)});
  n->var = std::move(x);
  n->label = std::move(u);
  n->mf = std::move(a);
  n->var2 = std::move(z);
  n->sf = std::move(gamma);
  return n;
}

}  // namespace rules

std::size_t derivation_size(const Derivation& d) {
  std::size_t n = 1;
  for (const auto& k : d.kids) n += derivation_size(*k);
  return n;
}

}  // namespace hx
