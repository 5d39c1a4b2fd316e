#include "hx/syntax.hpp"

#include <algorithm>
#include <cctype>

namespace hx {

// ---------------------------------------------------------------------------
// Term
// ---------------------------------------------------------------------------

struct Term::Node {
  Kind kind;
  Ident name;
  std::vector<Term> args;
};

Term Term::var(Ident name) {
  return Term(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}}));
}

Term Term::app(Ident symbol, std::vector<Term> args) {
  return Term(std::make_shared<const Node>(Node{Kind::App, std::move(symbol), std::move(args)}));
}

Term::Kind Term::kind() const { return node_->kind; }
const Ident& Term::name() const { return node_->name; }
std::span<const Term> Term::args() const { return node_->args; }

bool Term::operator==(const Term& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind || node_->name != o.node_->name) return false;
  return node_->args == o.node_->args;
}

// Three-way, so deep terms are walked once rather than twice per level.
int Term::compare(const Term& o) const {
  if (node_ == o.node_) return 0;
  if (node_->kind != o.node_->kind) return node_->kind < o.node_->kind ? -1 : 1;
  if (int c = node_->name.compare(o.node_->name)) return c < 0 ? -1 : 1;
  const auto& xs = node_->args;
  const auto& ys = o.node_->args;
  for (std::size_t i = 0; i < xs.size() && i < ys.size(); ++i)
    if (int c = xs[i].compare(ys[i])) return c;
  return xs.size() < ys.size() ? -1 : xs.size() > ys.size() ? 1 : 0;
}

bool Term::operator<(const Term& o) const { return compare(o) < 0; }

Term numeral(std::uint64_t k) { return succ_n(Term::app("0"), k); }

Term succ_n(Term base, std::uint64_t k) {
  for (std::uint64_t i = 0; i < k; ++i) base = Term::app("succ", {base});
  return base;
}

std::optional<std::uint64_t> as_numeral(const Term& t) {
  std::uint64_t k = 0;
  const Term* cur = &t;
  while (!cur->is_var() && cur->name() == "succ" && cur->args().size() == 1) {
    ++k;
    cur = &cur->args()[0];
  }
  if (!cur->is_var() && cur->name() == "0" && cur->args().empty()) return k;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// StateFormula
// ---------------------------------------------------------------------------

struct StateFormula::Node {
  Kind kind;
  Ident pred;
  std::vector<Term> args;
  std::optional<StateFormula> l, r;
};

StateFormula StateFormula::top() {
  static const auto n = std::make_shared<const Node>(Node{Kind::Top, {}, {}, {}, {}});
  return StateFormula(n);
}

StateFormula StateFormula::bot() {
  static const auto n = std::make_shared<const Node>(Node{Kind::Bot, {}, {}, {}, {}});
  return StateFormula(n);
}

StateFormula StateFormula::atom(Ident pred, std::vector<Term> args) {
  return StateFormula(
      std::make_shared<const Node>(Node{Kind::Atom, std::move(pred), std::move(args), {}, {}}));
}

StateFormula StateFormula::conj(StateFormula l, StateFormula r) {
  return StateFormula(std::make_shared<const Node>(Node{Kind::And, {}, {}, std::move(l), std::move(r)}));
}

StateFormula StateFormula::disj(StateFormula l, StateFormula r) {
  return StateFormula(std::make_shared<const Node>(Node{Kind::Or, {}, {}, std::move(l), std::move(r)}));
}

StateFormula StateFormula::imp(StateFormula l, StateFormula r) {
  return StateFormula(std::make_shared<const Node>(Node{Kind::Imp, {}, {}, std::move(l), std::move(r)}));
}

StateFormula::Kind StateFormula::kind() const { return node_->kind; }
const Ident& StateFormula::pred() const { return node_->pred; }
std::span<const Term> StateFormula::args() const { return node_->args; }
const StateFormula& StateFormula::lhs() const { return *node_->l; }
const StateFormula& StateFormula::rhs() const { return *node_->r; }

bool StateFormula::operator==(const StateFormula& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::Atom:
      return node_->pred == o.node_->pred && node_->args == o.node_->args;
    default:
      return *node_->l == *o.node_->l && *node_->r == *o.node_->r;
  }
}

bool StateFormula::operator<(const StateFormula& o) const {
  if (node_ == o.node_) return false;
  if (node_->kind != o.node_->kind) return node_->kind < o.node_->kind;
  switch (node_->kind) {
    case Kind::Top:
    case Kind::Bot:
      return false;
    case Kind::Atom:
      if (node_->pred != o.node_->pred) return node_->pred < o.node_->pred;
      return std::lexicographical_compare(node_->args.begin(), node_->args.end(),
                                          o.node_->args.begin(), o.node_->args.end());
    default:
      if (!(*node_->l == *o.node_->l)) return *node_->l < *o.node_->l;
      return *node_->r < *o.node_->r;
  }
}

// ---------------------------------------------------------------------------
// MainFormula
// ---------------------------------------------------------------------------

struct MainFormula::Node {
  Kind kind;
  Ident name;  // predicate or bound variable
  std::vector<Term> args;
  std::optional<MainFormula> l, r;
  std::optional<Triple> triple;
};

MainFormula MainFormula::top() {
  static const auto n = std::make_shared<const Node>(Node{Kind::Top, {}, {}, {}, {}, {}});
  return MainFormula(n);
}

MainFormula MainFormula::bot() {
  static const auto n = std::make_shared<const Node>(Node{Kind::Bot, {}, {}, {}, {}, {}});
  return MainFormula(n);
}

MainFormula MainFormula::atom(Ident pred, std::vector<Term> args) {
  return MainFormula(
      std::make_shared<const Node>(Node{Kind::Atom, std::move(pred), std::move(args), {}, {}, {}}));
}

MainFormula MainFormula::conj(MainFormula l, MainFormula r) {
  return MainFormula(
      std::make_shared<const Node>(Node{Kind::And, {}, {}, std::move(l), std::move(r), {}}));
}

MainFormula MainFormula::disj(MainFormula l, MainFormula r) {
  return MainFormula(
      std::make_shared<const Node>(Node{Kind::Or, {}, {}, std::move(l), std::move(r), {}}));
}

MainFormula MainFormula::exists(Ident var, MainFormula body) {
  return MainFormula(
      std::make_shared<const Node>(Node{Kind::Exists, std::move(var), {}, std::move(body), {}, {}}));
}

MainFormula MainFormula::imp(MainFormula antecedent, Triple consequent) {
  return MainFormula(std::make_shared<const Node>(
      Node{Kind::ImpTriple, {}, {}, std::move(antecedent), {}, std::move(consequent)}));
}

MainFormula MainFormula::forall(Ident var, Triple body) {
  return MainFormula(
      std::make_shared<const Node>(Node{Kind::ForallTriple, std::move(var), {}, {}, {}, std::move(body)}));
}

MainFormula::Kind MainFormula::kind() const { return node_->kind; }
const Ident& MainFormula::pred() const { return node_->name; }
std::span<const Term> MainFormula::args() const { return node_->args; }
const MainFormula& MainFormula::lhs() const { return *node_->l; }
const MainFormula& MainFormula::rhs() const { return *node_->r; }
const Ident& MainFormula::var() const { return node_->name; }
const MainFormula& MainFormula::body() const { return *node_->l; }
const MainFormula& MainFormula::antecedent() const { return *node_->l; }
const Triple& MainFormula::triple() const { return *node_->triple; }

bool MainFormula::operator==(const MainFormula& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Top:
    case Kind::Bot:
      return true;
    case Kind::Atom:
      return node_->name == o.node_->name && node_->args == o.node_->args;
    case Kind::And:
    case Kind::Or:
      return *node_->l == *o.node_->l && *node_->r == *o.node_->r;
    case Kind::Exists:
      return node_->name == o.node_->name && *node_->l == *o.node_->l;
    case Kind::ImpTriple:
      return *node_->l == *o.node_->l && *node_->triple == *o.node_->triple;
    case Kind::ForallTriple:
      return node_->name == o.node_->name && *node_->triple == *o.node_->triple;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Context
// ---------------------------------------------------------------------------

Context::Context(std::vector<Hypothesis> hyps) : hyps_(std::move(hyps)) {
  for (std::size_t i = 0; i < hyps_.size(); ++i)
    for (std::size_t j = i + 1; j < hyps_.size(); ++j)
      if (hyps_[i].label == hyps_[j].label) throw Error("duplicate hypothesis label '" + hyps_[i].label + "'");
}

const MainFormula* Context::find(const Ident& label) const {
  for (const auto& h : hyps_)
    if (h.label == label) return &h.formula;
  return nullptr;
}

Context Context::extended(const Ident& label, MainFormula formula) const {
  if (contains(label)) throw Error("hypothesis label '" + label + "' already in context");
  Context c = *this;
  c.hyps_.push_back({label, std::move(formula)});
  return c;
}

Context Context::replaced(const Ident& label, MainFormula formula) const {
  Context c = *this;
  for (auto& h : c.hyps_)
    if (h.label == label) {
      h.formula = std::move(formula);
      return c;
    }
  c.hyps_.push_back({label, std::move(formula)});
  return c;
}

Context Context::without(const Ident& label) const {
  Context c;
  for (const auto& h : hyps_)
    if (h.label != label) c.hyps_.push_back(h);
  return c;
}

VarSet Context::free_vars() const {
  VarSet out;
  for (const auto& h : hyps_) collect_free_vars(h.formula, out);
  return out;
}

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

Signature Signature::arithmetic() {
  Signature s;
  s.mode = Mode::SA;
  s.functions = {{"0", 0}, {"succ", 1}, {"add", 2}, {"mul", 2}, {"pred", 1}};
  s.predicates = {{"eq", 2}};
  s.canonical_constant = "0";
  return s;
}

void Signature::add_function(const Ident& f, int arity) {
  auto it = functions.find(f);
  if (it != functions.end()) throw Error("duplicate function symbol '" + f + "'");
  functions[f] = arity;
  if (arity == 0 && canonical_constant.empty()) canonical_constant = f;
}

void Signature::add_predicate(const Ident& p, int arity) {
  if (predicates.count(p)) throw Error("duplicate predicate '" + p + "'");
  if (state_predicates.count(p)) throw Error("predicate '" + p + "' already declared as a state predicate");
  predicates[p] = arity;
}

void Signature::add_state_predicate(const Ident& p, int arity) {
  if (state_predicates.count(p)) throw Error("duplicate state predicate '" + p + "'");
  if (predicates.count(p)) throw Error("state predicate '" + p + "' already declared as a predicate");
  state_predicates[p] = arity;
}

void Signature::check(const Term& t) const {
  if (t.is_var()) return;
  auto it = functions.find(t.name());
  if (it == functions.end()) throw Error("unknown function symbol '" + t.name() + "'");
  if (static_cast<std::size_t>(it->second) != t.args().size())
    throw Error("function '" + t.name() + "' expects " + std::to_string(it->second) + " argument(s), got " +
                std::to_string(t.args().size()));
  for (const auto& a : t.args()) check(a);
}

void Signature::check(const StateFormula& a) const {
  using K = StateFormula::Kind;
  switch (a.kind()) {
    case K::Top:
    case K::Bot:
      return;
    case K::Atom: {
      auto it = state_predicates.find(a.pred());
      if (it == state_predicates.end()) throw Error("unknown state predicate '" + a.pred() + "'");
      if (static_cast<std::size_t>(it->second) != a.args().size())
        throw Error("state predicate '" + a.pred() + "' expects " + std::to_string(it->second) +
                    " argument(s), got " + std::to_string(a.args().size()));
      for (const auto& t : a.args()) check(t);
      return;
    }
    default:
      check(a.lhs());
      check(a.rhs());
  }
}

void Signature::check(const MainFormula& a) const {
  using K = MainFormula::Kind;
  switch (a.kind()) {
    case K::Top:
    case K::Bot:
      return;
    case K::Atom: {
      auto it = predicates.find(a.pred());
      if (it == predicates.end()) throw Error("unknown predicate '" + a.pred() + "'");
      if (static_cast<std::size_t>(it->second) != a.args().size())
        throw Error("predicate '" + a.pred() + "' expects " + std::to_string(it->second) + " argument(s), got " +
                    std::to_string(a.args().size()));
      for (const auto& t : a.args()) check(t);
      return;
    }
    case K::And:
    case K::Or:
      check(a.lhs());
      check(a.rhs());
      return;
    case K::Exists:
      check(a.body());
      return;
    case K::ImpTriple:
      check(a.antecedent());
      [[fallthrough]];
    case K::ForallTriple:
      check(a.triple().pre);
      check(a.triple().body);
      check(a.triple().post);
      return;
  }
}

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

void collect_free_vars(const Term& t, VarSet& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_free_vars(a, out);
}

void collect_free_vars(const StateFormula& a, VarSet& out) {
  using K = StateFormula::Kind;
  switch (a.kind()) {
    case K::Top:
    case K::Bot:
      return;
    case K::Atom:
      for (const auto& t : a.args()) collect_free_vars(t, out);
      return;
    default:
      collect_free_vars(a.lhs(), out);
      collect_free_vars(a.rhs(), out);
  }
}

namespace {
void collect_triple(const Triple& t, VarSet& out) {
  collect_free_vars(t.pre, out);
  collect_free_vars(t.body, out);
  collect_free_vars(t.post, out);
}
}  // namespace

void collect_free_vars(const MainFormula& a, VarSet& out) {
  using K = MainFormula::Kind;
  switch (a.kind()) {
    case K::Top:
    case K::Bot:
      return;
    case K::Atom:
      for (const auto& t : a.args()) collect_free_vars(t, out);
      return;
    case K::And:
    case K::Or:
      collect_free_vars(a.lhs(), out);
      collect_free_vars(a.rhs(), out);
      return;
    case K::Exists: {
      VarSet inner;
      collect_free_vars(a.body(), inner);
      inner.erase(a.var());
      out.insert(inner.begin(), inner.end());
      return;
    }
    case K::ImpTriple:
      collect_free_vars(a.antecedent(), out);
      collect_triple(a.triple(), out);
      return;
    case K::ForallTriple: {
      VarSet inner;
      collect_triple(a.triple(), inner);
      inner.erase(a.var());
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

VarSet free_vars(const Term& t) {
  VarSet s;
  collect_free_vars(t, s);
  return s;
}

VarSet free_vars(const StateFormula& a) {
  VarSet s;
  collect_free_vars(a, s);
  return s;
}

VarSet free_vars(const MainFormula& a) {
  VarSet s;
  collect_free_vars(a, s);
  return s;
}

VarSet free_vars(const Triple& t) {
  VarSet s;
  collect_triple(t, s);
  return s;
}

bool occurs_free(const Ident& v, const MainFormula& a) { return free_vars(a).count(v) > 0; }

Ident fresh_name(const Ident& base, const VarSet& avoid) {
  if (!avoid.count(base)) return base;
  // strip an existing numeric suffix so x1 -> x2 rather than x11
  std::size_t cut = base.size();
  while (cut > 0 && std::isdigit(static_cast<unsigned char>(base[cut - 1]))) --cut;
  Ident stem = cut == 0 ? base : base.substr(0, cut);
  for (std::uint64_t i = 1;; ++i) {
    Ident cand = stem + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

Term subst(const Term& t, const Ident& var, const Term& by) {
  if (t.is_var()) return t.name() == var ? by : t;
  bool changed = false;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) {
    args.push_back(subst(a, var, by));
    if (!(args.back() == a)) changed = true;
  }
  return changed ? Term::app(t.name(), std::move(args)) : t;
}

StateFormula subst(const StateFormula& a, const Ident& var, const Term& by) {
  using K = StateFormula::Kind;
  switch (a.kind()) {
    case K::Top:
    case K::Bot:
      return a;
    case K::Atom: {
      std::vector<Term> args;
      for (const auto& t : a.args()) args.push_back(subst(t, var, by));
      return StateFormula::atom(a.pred(), std::move(args));
    }
    case K::And:
      return StateFormula::conj(subst(a.lhs(), var, by), subst(a.rhs(), var, by));
    case K::Or:
      return StateFormula::disj(subst(a.lhs(), var, by), subst(a.rhs(), var, by));
    case K::Imp:
      return StateFormula::imp(subst(a.lhs(), var, by), subst(a.rhs(), var, by));
  }
  return a;
}

Triple subst(const Triple& t, const Ident& var, const Term& by) {
  return {subst(t.pre, var, by), subst(t.body, var, by), subst(t.post, var, by)};
}

MainFormula subst(const MainFormula& a, const Ident& var, const Term& by) {
  using K = MainFormula::Kind;
  switch (a.kind()) {
    case K::Top:
    case K::Bot:
      return a;
    case K::Atom: {
      std::vector<Term> args;
      for (const auto& t : a.args()) args.push_back(subst(t, var, by));
      return MainFormula::atom(a.pred(), std::move(args));
    }
    case K::And:
      return MainFormula::conj(subst(a.lhs(), var, by), subst(a.rhs(), var, by));
    case K::Or:
      return MainFormula::disj(subst(a.lhs(), var, by), subst(a.rhs(), var, by));
    case K::ImpTriple:
      return MainFormula::imp(subst(a.antecedent(), var, by), subst(a.triple(), var, by));
    case K::Exists:
    case K::ForallTriple: {
      const Ident& x = a.var();
      if (x == var || !occurs_free(var, a)) return a;
      VarSet by_fv = free_vars(by);
      Ident bound = x;
      if (by_fv.count(x)) {
        VarSet avoid = by_fv;
        collect_free_vars(a, avoid);
        avoid.insert(var);
        bound = fresh_name(x, avoid);
      }
      const Term bv = Term::var(bound);
      if (a.kind() == K::Exists) {
        MainFormula body = bound == x ? a.body() : subst(a.body(), x, bv);
        return MainFormula::exists(bound, subst(body, var, by));
      }
      Triple body = bound == x ? a.triple() : subst(a.triple(), x, bv);
      return MainFormula::forall(bound, subst(body, var, by));
    }
  }
  return a;
}

namespace {
Term replace_in_term(const Term& t, const Term& from, const Term& to) {
  if (t == from) return to;
  if (t.is_var()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(replace_in_term(a, from, to));
  return Term::app(t.name(), std::move(args));
}
}  // namespace

StateFormula replace_term(const StateFormula& a, const Term& from, const Term& to) {
  using K = StateFormula::Kind;
  switch (a.kind()) {
    case K::Top:
    case K::Bot:
      return a;
    case K::Atom: {
      std::vector<Term> args;
      for (const auto& t : a.args()) args.push_back(replace_in_term(t, from, to));
      return StateFormula::atom(a.pred(), std::move(args));
    }
    case K::And:
      return StateFormula::conj(replace_term(a.lhs(), from, to), replace_term(a.rhs(), from, to));
    case K::Or:
      return StateFormula::disj(replace_term(a.lhs(), from, to), replace_term(a.rhs(), from, to));
    case K::Imp:
      return StateFormula::imp(replace_term(a.lhs(), from, to), replace_term(a.rhs(), from, to));
  }
  return a;
}

// ---------------------------------------------------------------------------
// Alpha equivalence
// ---------------------------------------------------------------------------

namespace {

// Bound variables are compared by binding depth via two parallel maps.
struct AlphaEnv {
  std::vector<std::pair<Ident, Ident>> binders;

  bool vars_match(const Ident& a, const Ident& b) const {
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
      bool la = it->first == a, lb = it->second == b;
      if (la || lb) return la && lb;
    }
    return a == b;
  }
};

bool term_alpha(const Term& a, const Term& b, const AlphaEnv& env) {
  if (a.is_var() != b.is_var()) return false;
  if (a.is_var()) return env.vars_match(a.name(), b.name());
  if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!term_alpha(a.args()[i], b.args()[i], env)) return false;
  return true;
}

bool sf_alpha(const StateFormula& a, const StateFormula& b, const AlphaEnv& env) {
  using K = StateFormula::Kind;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case K::Top:
    case K::Bot:
      return true;
    case K::Atom:
      if (a.pred() != b.pred() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!term_alpha(a.args()[i], b.args()[i], env)) return false;
      return true;
    default:
      return sf_alpha(a.lhs(), b.lhs(), env) && sf_alpha(a.rhs(), b.rhs(), env);
  }
}

bool mf_alpha(const MainFormula& a, const MainFormula& b, AlphaEnv& env);

bool triple_alpha(const Triple& a, const Triple& b, AlphaEnv& env) {
  return sf_alpha(a.pre, b.pre, env) && mf_alpha(a.body, b.body, env) && sf_alpha(a.post, b.post, env);
}

bool mf_alpha(const MainFormula& a, const MainFormula& b, AlphaEnv& env) {
  using K = MainFormula::Kind;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case K::Top:
    case K::Bot:
      return true;
    case K::Atom:
      if (a.pred() != b.pred() || a.args().size() != b.args().size()) return false;
      for (std::size_t i = 0; i < a.args().size(); ++i)
        if (!term_alpha(a.args()[i], b.args()[i], env)) return false;
      return true;
    case K::And:
    case K::Or:
      return mf_alpha(a.lhs(), b.lhs(), env) && mf_alpha(a.rhs(), b.rhs(), env);
    case K::ImpTriple:
      return mf_alpha(a.antecedent(), b.antecedent(), env) && triple_alpha(a.triple(), b.triple(), env);
    case K::Exists: {
      env.binders.emplace_back(a.var(), b.var());
      bool ok = mf_alpha(a.body(), b.body(), env);
      env.binders.pop_back();
      return ok;
    }
    case K::ForallTriple: {
      env.binders.emplace_back(a.var(), b.var());
      bool ok = triple_alpha(a.triple(), b.triple(), env);
      env.binders.pop_back();
      return ok;
    }
  }
  return false;
}

}  // namespace

bool alpha_eq(const MainFormula& a, const MainFormula& b) {
  AlphaEnv env;
  return mf_alpha(a, b, env);
}

bool alpha_eq(const Triple& a, const Triple& b) {
  AlphaEnv env;
  return triple_alpha(a, b, env);
}

}  // namespace hx
