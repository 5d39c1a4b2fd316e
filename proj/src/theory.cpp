#include "hx/theory.hpp"

#include <algorithm>

#include "hx/print.hpp"

namespace hx {

namespace {

bool is_conj_of_atoms(const StateFormula& a, const FormulaMetaVar& mv) {
  using K = StateFormula::Kind;
  if (a.kind() == K::And) return is_conj_of_atoms(a.lhs(), mv) && is_conj_of_atoms(a.rhs(), mv);
  if (a.kind() != K::Atom) return false;
  if (!mv.preds.empty() && std::find(mv.preds.begin(), mv.preds.end(), a.pred()) == mv.preds.end()) return false;
  if (!mv.arg_domain.empty())
    for (const auto& t : a.args())
      if (std::find(mv.arg_domain.begin(), mv.arg_domain.end(), t) == mv.arg_domain.end()) return false;
  return true;
}

StateFormula fill_formula_metavars(const StateFormula& a, const SAxiomSchema& s, const SAxiomBinding& b) {
  using K = StateFormula::Kind;
  switch (a.kind()) {
    case K::Top:
    case K::Bot:
      return a;
    case K::Atom: {
      if (a.args().empty()) {
        for (const auto& mv : s.formula_metavars)
          if (mv.name == a.pred()) return b.formulas.at(mv.name);
      }
      return a;
    }
    case K::And:
      return StateFormula::conj(fill_formula_metavars(a.lhs(), s, b), fill_formula_metavars(a.rhs(), s, b));
    case K::Or:
      return StateFormula::disj(fill_formula_metavars(a.lhs(), s, b), fill_formula_metavars(a.rhs(), s, b));
    case K::Imp:
      return StateFormula::imp(fill_formula_metavars(a.lhs(), s, b), fill_formula_metavars(a.rhs(), s, b));
  }
  return a;
}

MainFormula subst_terms(const MainFormula& a, const Binding& b) {
  // Parallel substitution through placeholders.
  MainFormula r = a;
  std::map<Ident, Ident> tmp;
  int i = 0;
  for (const auto& [k, _] : b) {
    Ident ph = "\x01sv" + std::to_string(i++);
    tmp[k] = ph;
    r = subst(r, k, Term::var(ph));
  }
  for (const auto& [k, v] : b) r = subst(r, tmp[k], v);
  return r;
}

StateFormula subst_terms(const StateFormula& a, const Binding& b) {
  StateFormula r = a;
  std::map<Ident, Ident> tmp;
  int i = 0;
  for (const auto& [k, _] : b) {
    Ident ph = "\x01sv" + std::to_string(i++);
    tmp[k] = ph;
    r = subst(r, k, Term::var(ph));
  }
  for (const auto& [k, v] : b) r = subst(r, tmp[k], v);
  return r;
}

}  // namespace

StType real_type(const MainFormula& a) {
  using K = MainFormula::Kind;
  switch (a.kind()) {
    case K::Top:
    case K::Bot:
    case K::Atom:
      return StType::c();
    case K::And:
      return StType::prod(real_type(a.lhs()), real_type(a.rhs()));
    case K::Or:
      return StType::sum(real_type(a.lhs()), real_type(a.rhs()));
    case K::Exists:
      return StType::prod(StType::d(), real_type(a.body()));
    case K::ImpTriple:
      return StType::arrow(real_type(a.antecedent()), real_type(a.triple().body));
    case K::ForallTriple:
      return StType::arrow(StType::d(), real_type(a.triple().body));
  }
  return StType::c();
}

Theory Theory::predicate_logic() {
  Theory t;
  t.sig.mode = Mode::SL;
  return t;
}

Theory Theory::arithmetic() {
  Theory t;
  t.sig = Signature::arithmetic();
  auto v = [](const char* n) { return Term::var(n); };
  auto f = [](const char* n, std::vector<Term> a) { return Term::app(n, std::move(a)); };
  const Term zero = numeral(0);
  t.equations = {
      {"add0", {"x"}, f("add", {v("x"), zero}), v("x")},
      {"addS", {"x", "y"}, f("add", {v("x"), f("succ", {v("y")})}), f("succ", {f("add", {v("x"), v("y")})})},
      {"mul0", {"x"}, f("mul", {v("x"), zero}), zero},
      {"mulS", {"x", "y"}, f("mul", {v("x"), f("succ", {v("y")})}), f("add", {f("mul", {v("x"), v("y")}), v("x")})},
      {"pred0", {}, f("pred", {zero}), zero},
      {"predS", {"x"}, f("pred", {f("succ", {v("x")})}), v("x")},
  };
  return t;
}

const SAxiomSchema& Theory::saxiom(const Ident& name) const {
  for (const auto& s : saxioms)
    if (s.name == name) return s;
  throw Error("unknown main axiom '" + name + "'");
}

bool Theory::has_saxiom(const Ident& name) const {
  return std::any_of(saxioms.begin(), saxioms.end(), [&](const SAxiomSchema& s) { return s.name == name; });
}

const DefEquation& Theory::equation(const Ident& name) const {
  for (const auto& e : equations)
    if (e.name == name) return e;
  throw Error("unknown defining equation '" + name + "'");
}

void Theory::add_haxiom(HAxiomSchema s) {
  for (const auto& h : haxioms)
    if (h.name == s.name) throw Error("duplicate state axiom '" + s.name + "'");
  for (const auto& h : s.hyps) sig.check(h);
  sig.check(s.goal);
  haxioms.push_back(std::move(s));
}

void Theory::add_saxiom(SAxiomSchema s) {
  if (has_saxiom(s.name)) throw Error("duplicate main axiom '" + s.name + "'");
  sig.check(s.pattern.body);
  if (s.realizer) {
    TypingCtx ctx;
    for (const auto& mv : s.term_metavars) ctx.insert_or_assign(mv.name, StType::d());
    StType got = typecheck(ctx, *s.realizer, st_env());
    StType want = real_type(s.pattern.body);
    if (!(got == want))
      throw TypeError("realizer of '" + s.name + "' has type " + to_string(got) + ", the axiom needs " +
                      to_string(want));
  } else if (s.builder.empty()) {
    throw Error("main axiom '" + s.name + "' has no realizer");
  }
  saxioms.push_back(std::move(s));
}

void Theory::add_constant(const Ident& name, StType type) {
  if (constants.count(name)) throw Error("duplicate constant '" + name + "'");
  if (sig.functions.count(name)) throw Error("constant '" + name + "' clashes with a function symbol");
  constants.insert_or_assign(name, std::move(type));
}

Triple instantiate_saxiom(const SAxiomSchema& s, const SAxiomBinding& b) {
  for (const auto& mv : s.term_metavars) {
    auto it = b.terms.find(mv.name);
    if (it == b.terms.end()) throw Error("main axiom '" + s.name + "': metavariable '" + mv.name + "' is unbound");
    if (!mv.domain.empty() && std::find(mv.domain.begin(), mv.domain.end(), it->second) == mv.domain.end())
      throw Error("main axiom '" + s.name + "': " + to_string(it->second) + " is outside the domain of '" +
                  mv.name + "'");
  }
  for (const auto& mv : s.formula_metavars) {
    auto it = b.formulas.find(mv.name);
    if (it == b.formulas.end())
      throw Error("main axiom '" + s.name + "': formula metavariable '" + mv.name + "' is unbound");
    if (mv.shape == FormulaMetaVar::Shape::Conj && !is_conj_of_atoms(it->second, mv))
      throw Error("main axiom '" + s.name + "': " + to_string(it->second) + " is not a conjunction of the form '" +
                  mv.name + "' requires");
  }
  if (b.terms.size() != s.term_metavars.size() || b.formulas.size() != s.formula_metavars.size())
    throw Error("main axiom '" + s.name + "': binding names an unknown metavariable");

  StateFormula pre = subst_terms(fill_formula_metavars(s.pattern.pre, s, b), b.terms);
  MainFormula body = subst_terms(s.pattern.body, b.terms);
  StateFormula post = s.swap_post ? swap_locations(b.formulas.at(s.swap_post->formula),
                                                   b.terms.at(s.swap_post->l), b.terms.at(s.swap_post->lp))
                                  : subst_terms(fill_formula_metavars(s.pattern.post, s, b), b.terms);
  Triple out{std::move(pre), std::move(body), std::move(post)};
  return out;
}

StTerm saxiom_realizer(const Theory& th, const SAxiomSchema& s, const SAxiomBinding& b) {
  if (s.realizer) {
    // Parallel substitution: rename metavariables to placeholders first.
    StTerm r = *s.realizer;
    std::map<Ident, Ident> tmp;
    int i = 0;
    for (const auto& [k, _] : b.terms) {
      Ident ph = "\x01rv" + std::to_string(i++);
      tmp[k] = ph;
      r = subst(r, k, StTerm::var(ph));
    }
    for (const auto& [k, v] : b.terms) r = subst(r, tmp[k], term_to_st(v));
    return r;
  }
  auto it = th.builders.find(s.builder);
  if (it == th.builders.end())
    throw Error("main axiom '" + s.name + "': realizer '" + s.builder + "' is not provided by model '" + th.model +
                "'");
  return it->second(b);
}

MainFormula eq_formula(const Term& s, const Term& t) { return MainFormula::atom("eq", {s, t}); }

std::optional<std::pair<Term, Term>> as_equation(const MainFormula& a) {
  if (a.kind() != MainFormula::Kind::Atom || a.pred() != "eq" || a.args().size() != 2) return std::nullopt;
  return std::make_pair(a.args()[0], a.args()[1]);
}

}  // namespace hx
