#include "hx/kernel.hpp"

#include "hx/print.hpp"
#include "hx/state_logic.hpp"

namespace hx {

std::string kind_name(KernelError::Kind k) {
  switch (k) {
    case KernelError::Kind::RuleMismatch: return "rule-mismatch";
    case KernelError::Kind::Eigenvariable: return "eigenvariable";
    case KernelError::Kind::StateMismatch: return "state-mismatch";
    case KernelError::Kind::UnprovableState: return "unprovable-state";
    case KernelError::Kind::UnknownName: return "unknown-name";
    case KernelError::Kind::IllFormed: return "ill-formed";
    case KernelError::Kind::Resource: return "resource";
  }
  return "?";
}

Ident realizer_var(const Ident& label) { return "x_" + label; }

TypingCtx real_context(const Context& ctx) {
  TypingCtx out;
  for (const auto& h : ctx.entries()) out.insert_or_assign(realizer_var(h.label), real_type(h.formula));
  return out;
}

namespace {

using K = KernelError::Kind;

Term zero() { return Term::app("0"); }
Term succ(Term t) { return Term::app("succ", {std::move(t)}); }

std::string show(const Triple& t) { return to_string(t); }
std::string show(const StateFormula& a) { return to_string(a); }
std::string show(const MainFormula& a) { return to_string(a); }

/// Two-phase substitution so that bound values never see each other's names.
Term subst_all(const Term& t, const std::vector<Ident>& vars, const std::vector<Term>& by) {
  Term r = t;
  std::vector<Ident> ph;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    ph.push_back("\x01" "eq" + std::to_string(i));
    r = subst(r, vars[i], Term::var(ph.back()));
  }
  for (std::size_t i = 0; i < vars.size(); ++i) r = subst(r, ph[i], by[i]);
  return r;
}

class Checker {
 public:
  Checker(const Theory& th, bool extract) : th_(th), extract_(extract) {}

  Checked run(const Derivation& d, const Context& ctx, const VarSet& scope) {
    try {
      return node(d, ctx, scope);
    } catch (const KernelError&) {
      throw;
    } catch (const ResourceError& e) {
      throw KernelError(K::Resource, d.rule, d.span, rule_keyword(d.rule) + ": " + e.what());
    } catch (const UnprovableSequent& e) {
      throw KernelError(K::UnprovableState, d.rule, d.span, rule_keyword(d.rule) + ": " + e.what());
    } catch (const Error& e) {
      throw KernelError(K::IllFormed, d.rule, d.span, rule_keyword(d.rule) + ": " + e.what());
    }
  }

 private:
  const Theory& th_;
  bool extract_;

  [[noreturn]] void fail(const Derivation& d, K kind, const std::string& msg) const {
    throw KernelError(kind, d.rule, d.span, rule_keyword(d.rule) + ": " + msg);
  }

  void arity(const Derivation& d, std::size_t n) const {
    if (d.kids.size() != n)
      fail(d, K::IllFormed, "expects " + std::to_string(n) + " premises, got " + std::to_string(d.kids.size()));
    for (const auto& k : d.kids)
      if (!k) fail(d, K::IllFormed, "missing premise");
  }

  const StateFormula& need_sf(const Derivation& d) const {
    if (!d.sf) fail(d, K::IllFormed, "missing state formula");
    th_.sig.check(*d.sf);
    return *d.sf;
  }
  const StateFormula& need_sf2(const Derivation& d) const {
    if (!d.sf2) fail(d, K::IllFormed, "missing second state formula");
    th_.sig.check(*d.sf2);
    return *d.sf2;
  }
  const MainFormula& need_mf(const Derivation& d) const {
    if (!d.mf) fail(d, K::IllFormed, "missing main formula");
    th_.sig.check(*d.mf);
    return *d.mf;
  }
  const Term& need_term(const Derivation& d) const {
    if (!d.term) fail(d, K::IllFormed, "missing term");
    th_.sig.check(*d.term);
    return *d.term;
  }
  void need_var(const Derivation& d, const Ident& v, const char* what) const {
    if (v.empty()) fail(d, K::IllFormed, std::string("missing ") + what);
  }
  void need_arith(const Derivation& d) const {
    if (th_.sig.mode != Mode::SA) fail(d, K::IllFormed, "rule is only available in arithmetic mode");
  }

  Context extend(const Derivation& d, const Context& ctx, const Ident& label, const MainFormula& a) const {
    need_var(d, label, "hypothesis label");
    if (ctx.contains(label)) fail(d, K::IllFormed, "hypothesis label '" + label + "' is already in use");
    return ctx.extended(label, a);
  }

  void same_state(const Derivation& d, const StateFormula& expected, const StateFormula& found,
                  const std::string& where) const {
    if (!(expected == found))
      fail(d, K::StateMismatch, where + ": expected " + show(expected) + ", found " + show(found));
  }

  void same_body(const Derivation& d, const MainFormula& expected, const MainFormula& found,
                 const std::string& where) const {
    if (!alpha_eq(expected, found))
      fail(d, K::RuleMismatch, where + ": expected " + show(expected) + ", found " + show(found));
  }

  std::pair<Term, Term> equation_of(const Derivation& d, const MainFormula& a, const std::string& where) const {
    auto e = as_equation(a);
    if (!e) fail(d, K::RuleMismatch, where + " must be an equation, found " + show(a));
    return *e;
  }

  void prove_h(const StateSequent& seq, const HintSet& h) const {
    StateLogicOptions o = th_.hopts;
    o.automatic = h.automatic;
    check_h_or_fail(seq, th_.haxioms, h.hints, o);
  }

  StTerm lam_d(const Ident& x, StTerm body) const { return StTerm::lam(x, StType::d(), std::move(body)); }

  Checked done(Triple t, StTerm r = StTerm::skip()) const { return Checked{std::move(t), std::move(r)}; }

  Checked node(const Derivation& d, const Context& ctx, const VarSet& scope) {
    switch (d.rule) {
      case Rule::Hyp: {
        arity(d, 0);
        need_var(d, d.label, "hypothesis label");
        const MainFormula* a = ctx.find(d.label);
        if (!a) fail(d, K::UnknownName, "no hypothesis labelled '" + d.label + "'");
        StateFormula alpha = d.sf ? need_sf(d) : StateFormula::top();
        return done({alpha, *a, alpha}, StTerm::var(realizer_var(d.label)));
      }
      case Rule::TopAx: {
        arity(d, 0);
        const StateFormula& alpha = need_sf(d);
        return done({alpha, MainFormula::top(), alpha});
      }
      case Rule::AndI: {
        arity(d, 2);
        Checked a = run(d.kid(0), ctx, scope);
        Checked b = run(d.kid(1), ctx, scope);
        same_state(d, a.triple.post, b.triple.pre, "postcondition of the first premise vs precondition of the second");
        return done({a.triple.pre, MainFormula::conj(a.triple.body, b.triple.body), b.triple.post},
                    ex([&] { return StTerm::comp(a.realizer, b.realizer); }));
      }
      case Rule::AndEL:
      case Rule::AndER: {
        arity(d, 1);
        Checked a = run(d.kid(0), ctx, scope);
        if (a.triple.body.kind() != MainFormula::Kind::And)
          fail(d, K::RuleMismatch, "premise must be a conjunction, found " + show(a.triple.body));
        bool left = d.rule == Rule::AndEL;
        const MainFormula& part = left ? a.triple.body.lhs() : a.triple.body.rhs();
        return done({a.triple.pre, part, a.triple.post},
                    ex([&] { return left ? StTerm::p0(a.realizer) : StTerm::p1(a.realizer); }));
      }
      case Rule::OrIL:
      case Rule::OrIR: {
        arity(d, 1);
        const MainFormula& other = need_mf(d);
        Checked a = run(d.kid(0), ctx, scope);
        bool left = d.rule == Rule::OrIL;
        MainFormula body = left ? MainFormula::disj(a.triple.body, other) : MainFormula::disj(other, a.triple.body);
        return done({a.triple.pre, body, a.triple.post}, ex([&] {
                      return left ? StTerm::inj0(a.realizer, real_type(other))
                                  : StTerm::inj1(a.realizer, real_type(other));
                    }));
      }
      case Rule::OrE: {
        arity(d, 3);
        need_var(d, d.label2, "second hypothesis label");
        Checked r = run(d.kid(0), ctx, scope);
        if (r.triple.body.kind() != MainFormula::Kind::Or)
          fail(d, K::RuleMismatch, "first premise must be a disjunction, found " + show(r.triple.body));
        const MainFormula& A = r.triple.body.lhs();
        const MainFormula& B = r.triple.body.rhs();
        Checked s = run(d.kid(1), extend(d, ctx, d.label, A), scope);
        Checked t = run(d.kid(2), extend(d, ctx, d.label2, B), scope);
        same_state(d, r.triple.post, s.triple.pre, "second premise precondition");
        same_state(d, r.triple.post, t.triple.pre, "third premise precondition");
        same_body(d, s.triple.body, t.triple.body, "third premise body");
        same_state(d, s.triple.post, t.triple.post, "third premise postcondition");
        return done({r.triple.pre, s.triple.body, s.triple.post}, ex([&] {
                      return StTerm::elim(r.realizer, StTerm::lam(realizer_var(d.label), real_type(A), s.realizer),
                                          StTerm::lam(realizer_var(d.label2), real_type(B), t.realizer));
                    }));
      }
      case Rule::ImpI: {
        arity(d, 1);
        const MainFormula& A = need_mf(d);
        const StateFormula& gamma = need_sf(d);
        Checked b = run(d.kid(0), extend(d, ctx, d.label, A), scope);
        return done({gamma, MainFormula::imp(A, b.triple), gamma},
                    ex([&] { return StTerm::lam(realizer_var(d.label), real_type(A), b.realizer); }));
      }
      case Rule::ImpE: {
        arity(d, 2);
        Checked f = run(d.kid(0), ctx, scope);
        Checked a = run(d.kid(1), ctx, scope);
        if (f.triple.body.kind() != MainFormula::Kind::ImpTriple)
          fail(d, K::RuleMismatch, "first premise must be an implication, found " + show(f.triple.body));
        const Triple& c = f.triple.body.triple();
        same_state(d, f.triple.post, a.triple.pre, "second premise precondition");
        same_body(d, f.triple.body.antecedent(), a.triple.body, "second premise body");
        same_state(d, c.pre, a.triple.post, "second premise postcondition");
        return done({f.triple.pre, c.body, c.post}, ex([&] { return StTerm::app(f.realizer, a.realizer); }));
      }
      case Rule::BotE: {
        arity(d, 1);
        const MainFormula& A = need_mf(d);
        const StateFormula& gamma = need_sf(d);
        Checked b = run(d.kid(0), ctx, scope);
        if (b.triple.body.kind() != MainFormula::Kind::Bot)
          fail(d, K::RuleMismatch, "premise must prove falsity, found " + show(b.triple.body));
        return done({b.triple.pre, A, gamma}, ex([&] { return StTerm::default_of(real_type(A)); }));
      }
      case Rule::ForallI: {
        arity(d, 1);
        need_var(d, d.var, "bound variable");
        const Ident& x = d.var;
        const Ident& y = d.var2.empty() ? d.var : d.var2;
        StateFormula gamma = d.sf ? need_sf(d) : StateFormula::top();
        if (ctx.free_vars().count(y)) fail(d, K::Eigenvariable, "'" + y + "' is free in the context");
        VarSet inner = scope;
        inner.insert(y);
        Checked p = run(d.kid(0), ctx, inner);
        Triple body = p.triple;
        if (x != y) {
          if (free_vars(p.triple).count(x))
            fail(d, K::Eigenvariable, "'" + x + "' is already free in the premise " + show(p.triple));
          body = subst(p.triple, y, Term::var(x));
        }
        return done({gamma, MainFormula::forall(x, body), gamma}, ex([&] { return lam_d(y, p.realizer); }));
      }
      case Rule::ForallE: {
        arity(d, 1);
        const Term& t = need_term(d);
        Checked p = run(d.kid(0), ctx, scope);
        if (p.triple.body.kind() != MainFormula::Kind::ForallTriple)
          fail(d, K::RuleMismatch, "premise must be a universal, found " + show(p.triple.body));
        const Ident& x = p.triple.body.var();
        Triple inst = subst(p.triple.body.triple(), x, t);
        same_state(d, inst.pre, p.triple.post, "premise postcondition");
        return done({p.triple.pre, inst.body, inst.post},
                    ex([&] { return StTerm::app(p.realizer, term_to_st(t)); }));
      }
      case Rule::ExistsI: {
        arity(d, 1);
        need_var(d, d.var, "bound variable");
        const MainFormula& A = need_mf(d);
        const Term& t = need_term(d);
        Checked p = run(d.kid(0), ctx, scope);
        same_body(d, subst(A, d.var, t), p.triple.body, "premise body");
        return done({p.triple.pre, MainFormula::exists(d.var, A), p.triple.post},
                    ex([&] { return StTerm::comp(term_to_st(t), p.realizer); }));
      }
      case Rule::ExistsE: {
        arity(d, 2);
        need_var(d, d.var, "eigenvariable");
        const Ident& y = d.var;
        Checked e = run(d.kid(0), ctx, scope);
        if (e.triple.body.kind() != MainFormula::Kind::Exists)
          fail(d, K::RuleMismatch, "first premise must be existential, found " + show(e.triple.body));
        const Ident& x = e.triple.body.var();
        const MainFormula& A = e.triple.body.body();
        if (y != x && occurs_free(y, A))
          fail(d, K::Eigenvariable, "'" + y + "' is free in " + show(A));
        VarSet inner = scope;
        inner.insert(y);
        MainFormula Ay = subst(A, x, Term::var(y));
        Checked c = run(d.kid(1), extend(d, ctx, d.label, Ay), inner);
        same_state(d, e.triple.post, c.triple.pre, "second premise precondition");
        VarSet bad = ctx.free_vars();
        collect_free_vars(c.triple.body, bad);
        collect_free_vars(e.triple.pre, bad);
        collect_free_vars(e.triple.post, bad);
        collect_free_vars(c.triple.post, bad);
        if (bad.count(y)) fail(d, K::Eigenvariable, "'" + y + "' occurs free in the conclusion, the states or the context");
        return done({e.triple.pre, c.triple.body, c.triple.post}, ex([&] {
                      StType Y = real_type(Ay);
                      VarSet avoid = free_vars(c.realizer);
                      avoid.insert(y);
                      avoid.insert(realizer_var(d.label));
                      Ident v = fresh_name("v", avoid);
                      StTerm inner_fn = lam_d(y, StTerm::lam(realizer_var(d.label), Y, c.realizer));
                      StTerm curried = StTerm::lam(
                          v, StType::prod(StType::d(), Y),
                          StTerm::app(StTerm::app(inner_fn, StTerm::p0(StTerm::var(v))), StTerm::p1(StTerm::var(v))));
                      return StTerm::app(curried, e.realizer);
                    }));
      }
      case Rule::Cons: {
        arity(d, 1);
        const StateFormula& alpha = need_sf(d);
        const StateFormula& delta = need_sf2(d);
        Checked p = run(d.kid(0), ctx, scope);
        prove_h({{alpha}, p.triple.pre}, d.hints);
        prove_h({{p.triple.post}, delta}, d.hints2);
        return done({alpha, p.triple.body, delta}, ex([&] { return p.realizer; }));
      }
      case Rule::Cond: {
        arity(d, 2);
        const StateFormula& a = need_sf(d);
        const StateFormula& b = need_sf2(d);
        Checked s = run(d.kid(0), ctx, scope);
        Checked t = run(d.kid(1), ctx, scope);
        const StateFormula& p1 = s.triple.pre;
        if (p1.kind() != StateFormula::Kind::And || !(p1.lhs() == a))
          fail(d, K::StateMismatch, "first premise precondition must be " + show(a) + " /\\ _, found " + show(p1));
        const StateFormula& gamma = p1.rhs();
        same_state(d, StateFormula::conj(b, gamma), t.triple.pre, "second premise precondition");
        same_body(d, s.triple.body, t.triple.body, "second premise body");
        same_state(d, s.triple.post, t.triple.post, "second premise postcondition");
        prove_h({{}, StateFormula::disj(a, b)}, d.hints);
        return done({gamma, s.triple.body, s.triple.post},
                    ex([&] { return StTerm::ite(a, s.realizer, t.realizer); }));
      }
      case Rule::SAxiom: {
        arity(d, 0);
        if (!th_.has_saxiom(d.name)) fail(d, K::UnknownName, "no main axiom named '" + d.name + "'");
        const SAxiomSchema& s = th_.saxiom(d.name);
        Triple t = instantiate_saxiom(s, d.sax);
        th_.sig.check(t.pre);
        th_.sig.check(t.body);
        th_.sig.check(t.post);
        return done(t, ex([&] { return saxiom_realizer(th_, s, d.sax); }));
      }
      case Rule::EqRefl: {
        arity(d, 0);
        need_eq(d);
        const Term& t = need_term(d);
        const StateFormula& alpha = need_sf(d);
        return done({alpha, eq_formula(t, t), alpha});
      }
      case Rule::EqSym: {
        arity(d, 1);
        Checked p = run(d.kid(0), ctx, scope);
        auto [s, t] = equation_of(d, p.triple.body, "premise");
        return done({p.triple.pre, eq_formula(t, s), p.triple.post}, ex([&] { return p.realizer; }));
      }
      case Rule::EqTrans: {
        arity(d, 2);
        Checked a = run(d.kid(0), ctx, scope);
        Checked b = run(d.kid(1), ctx, scope);
        auto [r, s1] = equation_of(d, a.triple.body, "first premise");
        auto [s2, t] = equation_of(d, b.triple.body, "second premise");
        if (!(s1 == s2))
          fail(d, K::RuleMismatch, "middle terms differ: " + to_string(s1) + " vs " + to_string(s2));
        same_state(d, a.triple.post, b.triple.pre, "second premise precondition");
        return done({a.triple.pre, eq_formula(r, t), b.triple.post},
                    ex([&] { return StTerm::p1(StTerm::comp(a.realizer, b.realizer)); }));
      }
      case Rule::Ext: {
        arity(d, 2);
        need_var(d, d.var, "abstraction variable");
        const MainFormula& A = need_mf(d);
        const StateFormula& gamma = need_sf(d);
        Checked e = run(d.kid(0), ctx, scope);
        Checked b = run(d.kid(1), ctx, scope);
        auto [s, t] = equation_of(d, e.triple.body, "first premise");
        same_state(d, e.triple.post, b.triple.pre, "second premise precondition");
        same_body(d, subst(A, d.var, s), b.triple.body, "second premise body");
        same_state(d, subst(gamma, d.var, s), b.triple.post, "second premise postcondition");
        return done({e.triple.pre, subst(A, d.var, t), subst(gamma, d.var, t)},
                    ex([&] { return StTerm::p1(StTerm::comp(e.realizer, b.realizer)); }));
      }
      case Rule::SuccNonzero: {
        arity(d, 0);
        need_arith(d);
        need_eq(d);
        const Term& t = need_term(d);
        const StateFormula& alpha = need_sf(d);
        MainFormula body =
            MainFormula::imp(eq_formula(succ(t), zero()), Triple{alpha, MainFormula::bot(), alpha});
        return done({alpha, body, alpha}, ex([&] { return StTerm::lam("w", StType::c(), StTerm::skip()); }));
      }
      case Rule::SuccInj: {
        arity(d, 1);
        need_arith(d);
        Checked p = run(d.kid(0), ctx, scope);
        auto [ss, st] = equation_of(d, p.triple.body, "premise");
        if (ss.is_var() || ss.name() != "succ" || st.is_var() || st.name() != "succ")
          fail(d, K::RuleMismatch, "premise must equate two successors, found " + show(p.triple.body));
        return done({p.triple.pre, eq_formula(ss.args()[0], st.args()[0]), p.triple.post},
                    ex([&] { return p.realizer; }));
      }
      case Rule::DefEq: {
        arity(d, 0);
        need_eq(d);
        const DefEquation* eq = nullptr;
        try {
          eq = &th_.equation(d.name);
        } catch (const Error&) {
          fail(d, K::UnknownName, "no defining equation named '" + d.name + "'");
        }
        if (d.args.size() != eq->vars.size())
          fail(d, K::IllFormed, "equation '" + d.name + "' takes " + std::to_string(eq->vars.size()) +
                                    " arguments, got " + std::to_string(d.args.size()));
        for (const auto& a : d.args) th_.sig.check(a);
        const StateFormula& alpha = need_sf(d);
        return done({alpha, eq_formula(subst_all(eq->lhs, eq->vars, d.args), subst_all(eq->rhs, eq->vars, d.args)),
                     alpha});
      }
      case Rule::Ind: {
        arity(d, 2);
        need_arith(d);
        need_var(d, d.var, "induction variable");
        const Ident& x = d.var;
        const MainFormula& A = need_mf(d);
        const StateFormula& gamma = need_sf(d);
        if (ctx.free_vars().count(x)) fail(d, K::Eigenvariable, "'" + x + "' is free in the context");
        Checked base = run(d.kid(0), ctx, scope);
        VarSet inner = scope;
        inner.insert(x);
        Checked step = run(d.kid(1), extend(d, ctx, d.label, A), inner);
        const StateFormula& alpha = base.triple.pre;
        const StateFormula& beta = step.triple.pre;
        if (free_vars(alpha).count(x))
          fail(d, K::Eigenvariable, "'" + x + "' is free in the base precondition " + show(alpha));
        same_body(d, subst(A, x, zero()), base.triple.body, "base body");
        same_state(d, subst(beta, x, zero()), base.triple.post, "base postcondition");
        same_body(d, subst(A, x, succ(Term::var(x))), step.triple.body, "step body");
        same_state(d, subst(beta, x, succ(Term::var(x))), step.triple.post, "step postcondition");
        return done({gamma, MainFormula::forall(x, Triple{alpha, A, beta}), gamma}, ex([&] {
                      return StTerm::rec(base.realizer,
                                         lam_d(x, StTerm::lam(realizer_var(d.label), real_type(A), step.realizer)));
                    }));
      }
      case Rule::While: {
        arity(d, 3);
        need_arith(d);
        need_var(d, d.var, "loop variable");
        need_var(d, d.var2, "condition placeholder");
        need_var(d, d.label, "hypothesis label");
        const Ident& x = d.var;
        const Ident& z = d.var2;
        const MainFormula& A = need_mf(d);
        const StateFormula& gamma = need_sf(d);
        const MainFormula* Ax = ctx.find(d.label);
        if (!Ax) fail(d, K::UnknownName, "the context has no hypothesis labelled '" + d.label + "'");
        same_body(d, A, *Ax, "hypothesis '" + d.label + "'");
        Context rest = ctx.without(d.label);
        if (rest.free_vars().count(x)) fail(d, K::Eigenvariable, "'" + x + "' is free in the context");
        Term x1 = succ(Term::var(x));
        VarSet inner = scope;
        inner.insert(x);
        Context c1 = ctx.replaced(d.label, subst(A, x, x1));
        Checked r = run(d.kid(0), c1, inner);
        Checked s = run(d.kid(1), c1, inner);
        Checked t = run(d.kid(2), ctx.replaced(d.label, subst(A, x, zero())), inner);
        const StateFormula& alpha = r.triple.post;
        StateFormula alpha1 = subst(alpha, x, x1);
        StateFormula gamma1 = subst(gamma, z, x1);
        const MainFormula& B = t.triple.body;
        const StateFormula& beta = t.triple.post;
        same_state(d, StateFormula::conj(gamma1, alpha1), r.triple.pre, "first premise precondition");
        same_body(d, A, r.triple.body, "first premise body");
        same_state(d, StateFormula::conj(StateFormula::neg(gamma1), alpha1), s.triple.pre,
                   "second premise precondition");
        same_body(d, B, s.triple.body, "second premise body");
        same_state(d, beta, s.triple.post, "second premise postcondition");
        same_state(d, subst(alpha, x, zero()), t.triple.pre, "third premise precondition");
        if (occurs_free(x, B)) fail(d, K::Eigenvariable, "'" + x + "' is free in " + show(B));
        if (free_vars(beta).count(x)) fail(d, K::Eigenvariable, "'" + x + "' is free in " + show(beta));
        return done({alpha, B, beta}, ex([&] {
                      StType X = real_type(A);
                      Ident u = realizer_var(d.label);
                      VarSet avoid = inner;
                      collect_free_vars(gamma, avoid);
                      avoid.erase(z);
                      avoid.insert(x);
                      avoid.insert(u);
                      for (const auto& v : free_vars(r.realizer)) avoid.insert(v);
                      for (const auto& v : free_vars(s.realizer)) avoid.insert(v);
                      for (const auto& v : free_vars(t.realizer)) avoid.insert(v);
                      Ident hole = avoid.count(z) ? fresh_name(z, avoid) : z;
                      StateFormula cond = hole == z ? gamma : subst(gamma, z, Term::var(hole));
                      StTerm loop = StTerm::while_loop(hole, cond, lam_d(x, StTerm::lam(u, X, r.realizer)),
                                                       lam_d(x, StTerm::lam(u, X, s.realizer)),
                                                       StTerm::lam(u, X, t.realizer), StTerm::var(x));
                      return StTerm::app(loop, StTerm::var(u));
                    }));
      }
    }
    fail(d, K::IllFormed, "unknown rule");
  }

  void need_eq(const Derivation& d) const {
    auto it = th_.sig.predicates.find("eq");
    if (it == th_.sig.predicates.end() || it->second != 2)
      fail(d, K::IllFormed, "equality is not declared in this theory");
  }

  template <class F>
  StTerm ex(F&& f) const {
    return extract_ ? f() : StTerm::skip();
  }
};

}  // namespace

Triple check(const Derivation& d, const Theory& th, const Context& ctx) {
  return Checker(th, false).run(d, ctx, ctx.free_vars()).triple;
}

Checked check_and_extract(const Derivation& d, const Theory& th, const Context& ctx) {
  return Checker(th, true).run(d, ctx, ctx.free_vars());
}

// ---------------------------------------------------------------------------
// Embedding of PL/HA derivations
// ---------------------------------------------------------------------------

MainFormula embed_formula(const MainFormula& a, const StateFormula& alpha) {
  using MK = MainFormula::Kind;
  switch (a.kind()) {
    case MK::Top:
    case MK::Bot:
    case MK::Atom: return a;
    case MK::And: return MainFormula::conj(embed_formula(a.lhs(), alpha), embed_formula(a.rhs(), alpha));
    case MK::Or: return MainFormula::disj(embed_formula(a.lhs(), alpha), embed_formula(a.rhs(), alpha));
    case MK::Exists: return MainFormula::exists(a.var(), embed_formula(a.body(), alpha));
    case MK::ImpTriple:
      return MainFormula::imp(embed_formula(a.antecedent(), alpha),
                              Triple{alpha, embed_formula(a.triple().body, alpha), alpha});
    case MK::ForallTriple:
      return MainFormula::forall(a.var(), Triple{alpha, embed_formula(a.triple().body, alpha), alpha});
  }
  return a;
}

Context embed_context(const Context& ctx, const StateFormula& alpha) {
  std::vector<Hypothesis> hs;
  for (const auto& h : ctx.entries()) hs.push_back({h.label, embed_formula(h.formula, alpha)});
  return Context(std::move(hs));
}

bool is_pl_formula(const MainFormula& a) {
  using MK = MainFormula::Kind;
  auto top = [](const StateFormula& s) { return s.kind() == StateFormula::Kind::Top; };
  switch (a.kind()) {
    case MK::Top:
    case MK::Bot:
    case MK::Atom: return true;
    case MK::And:
    case MK::Or: return is_pl_formula(a.lhs()) && is_pl_formula(a.rhs());
    case MK::Exists: return is_pl_formula(a.body());
    case MK::ImpTriple:
      return is_pl_formula(a.antecedent()) && top(a.triple().pre) && top(a.triple().post) &&
             is_pl_formula(a.triple().body);
    case MK::ForallTriple: return top(a.triple().pre) && top(a.triple().post) && is_pl_formula(a.triple().body);
  }
  return false;
}

namespace {

void bound_vars(const MainFormula& a, VarSet& out) {
  using MK = MainFormula::Kind;
  switch (a.kind()) {
    case MK::Top:
    case MK::Bot:
    case MK::Atom: return;
    case MK::And:
    case MK::Or:
      bound_vars(a.lhs(), out);
      bound_vars(a.rhs(), out);
      return;
    case MK::Exists:
      out.insert(a.var());
      bound_vars(a.body(), out);
      return;
    case MK::ImpTriple:
      bound_vars(a.antecedent(), out);
      bound_vars(a.triple().body, out);
      return;
    case MK::ForallTriple:
      out.insert(a.var());
      bound_vars(a.triple().body, out);
      return;
  }
}

bool pl_rule(Rule r) { return r != Rule::Cons && r != Rule::Cond && r != Rule::SAxiom && r != Rule::While; }

DerivPtr embed_node(const Derivation& d, const StateFormula& alpha, const VarSet& avoid) {
  if (!pl_rule(d.rule))
    throw KernelError(K::RuleMismatch, d.rule, d.span,
                      rule_keyword(d.rule) + ": not a rule of predicate logic or arithmetic");
  auto clash = [&](const Ident& v) {
    if (!v.empty() && avoid.count(v))
      throw KernelError(K::Eigenvariable, d.rule, d.span,
                        rule_keyword(d.rule) + ": variable '" + v + "' is free in the embedding state formula");
  };
  if (d.rule == Rule::ForallI || d.rule == Rule::ExistsE || d.rule == Rule::Ind || d.rule == Rule::ExistsI ||
      d.rule == Rule::Ext) {
    clash(d.var);
    clash(d.var2);
  }
  auto n = std::make_shared<Derivation>(d);
  if (d.mf) {
    VarSet b;
    bound_vars(*d.mf, b);
    for (const auto& v : b) clash(v);
    n->mf = embed_formula(*d.mf, alpha);
  }
  switch (d.rule) {
    case Rule::Hyp:
    case Rule::TopAx:
    case Rule::ImpI:
    case Rule::BotE:
    case Rule::ForallI:
    case Rule::EqRefl:
    case Rule::SuccNonzero:
    case Rule::DefEq:
    case Rule::Ind:
    case Rule::Ext: n->sf = alpha; break;
    default: break;
  }
  for (auto& k : n->kids) k = embed_node(*k, alpha, avoid);
  return n;
}

void require_pl(const Derivation& d) {
  if (!pl_rule(d.rule))
    throw KernelError(K::RuleMismatch, d.rule, d.span,
                      rule_keyword(d.rule) + ": not a rule of predicate logic or arithmetic");
  if (d.mf && !is_pl_formula(*d.mf))
    throw KernelError(K::IllFormed, d.rule, d.span,
                      rule_keyword(d.rule) + ": " + to_string(*d.mf) + " has a non-trivial state annotation");
  for (const auto& k : d.kids) require_pl(*k);
}

}  // namespace

DerivPtr embed_pl(const DerivPtr& d, const StateFormula& alpha) { return embed_node(*d, alpha, free_vars(alpha)); }

MainFormula check_pl(const Derivation& d, const Theory& th, const Context& ctx) {
  require_pl(d);
  for (const auto& h : ctx.entries())
    if (!is_pl_formula(h.formula))
      throw Error("hypothesis '" + h.label + "' has a non-trivial state annotation");
  Triple t = check(*embed_node(d, StateFormula::top(), {}), th, ctx);
  return t.body;
}

// ---------------------------------------------------------------------------
// Derived rules
// ---------------------------------------------------------------------------

DerivPtr derive_comp(DerivPtr d1, DerivPtr d2) { return rules::and_er(rules::and_i(std::move(d1), std::move(d2))); }

DerivPtr derive_ext(const DerivPtr& eq_pl, const Ident& x, const MainFormula& a, const StateFormula& alpha,
                    const StateFormula& beta, const DerivPtr& body, const Theory& th, const Context& ctx) {
  MainFormula eq = check_pl(*eq_pl, th, {});
  auto st = as_equation(eq);
  if (!st) throw Error("derive_ext: the arithmetic proof shows " + to_string(eq) + ", not an equation");
  const auto& [s, t] = *st;
  Triple b = check(*body, th, ctx);
  Triple want{subst(alpha, x, s), subst(a, x, s), subst(beta, x, s)};
  if (!(b.pre == want.pre) || !alpha_eq(b.body, want.body) || !(b.post == want.post))
    throw Error("derive_ext: the template gives " + to_string(want) + " but the body proves " + to_string(b));
  StateFormula alpha_t = subst(alpha, x, t);
  DerivPtr ext1 = rules::ext(x, a, beta, embed_pl(eq_pl, want.pre), body);
  DerivPtr ext2 = rules::ext(x, MainFormula::top(), alpha, rules::eq_sym(embed_pl(eq_pl, alpha_t)),
                             rules::top(alpha_t));
  return rules::and_er(rules::and_i(ext2, ext1));
}

}  // namespace hx
