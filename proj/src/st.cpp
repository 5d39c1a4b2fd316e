#include "hx/st.hpp"

#include <algorithm>

namespace hx {

using nlohmann::json;

// ---------------------------------------------------------------------------
// StType
// ---------------------------------------------------------------------------

struct StType::Node {
  Kind kind;
  std::optional<StType> l, r;
};

StType StType::d() {
  static const auto n = std::make_shared<const Node>(Node{Kind::D, {}, {}});
  return StType(n);
}

StType StType::c() {
  static const auto n = std::make_shared<const Node>(Node{Kind::C, {}, {}});
  return StType(n);
}

StType StType::prod(StType l, StType r) {
  return StType(std::make_shared<const Node>(Node{Kind::Prod, std::move(l), std::move(r)}));
}

StType StType::sum(StType l, StType r) {
  return StType(std::make_shared<const Node>(Node{Kind::Sum, std::move(l), std::move(r)}));
}

StType StType::arrow(StType a, StType b) {
  return StType(std::make_shared<const Node>(Node{Kind::Arrow, std::move(a), std::move(b)}));
}

StType::Kind StType::kind() const { return node_->kind; }
const StType& StType::left() const { return *node_->l; }
const StType& StType::right() const { return *node_->r; }

bool StType::operator==(const StType& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind) return false;
  if (node_->kind == Kind::D || node_->kind == Kind::C) return true;
  return *node_->l == *o.node_->l && *node_->r == *o.node_->r;
}

// ---------------------------------------------------------------------------
// StTerm
// ---------------------------------------------------------------------------

struct StTerm::Node {
  Kind kind;
  Ident name;
  std::optional<StType> type;
  std::optional<StateFormula> cond;
  std::vector<StTerm> kids;
};

namespace {
using TK = StTerm::Kind;

StTerm make(TK k, Ident name, std::optional<StType> ty, std::optional<StateFormula> cond, std::vector<StTerm> kids);
}  // namespace

StTerm StTerm::skip() {
  static const StTerm s(std::make_shared<const Node>(Node{Kind::Skip, {}, {}, {}, {}}));
  return s;
}

StTerm StTerm::default_of(StType t) {
  return StTerm(std::make_shared<const Node>(Node{Kind::Default, {}, std::move(t), {}, {}}));
}

StTerm StTerm::constant(Ident name) {
  return StTerm(std::make_shared<const Node>(Node{Kind::Const, std::move(name), {}, {}, {}}));
}

StTerm StTerm::fun(Ident symbol) {
  return StTerm(std::make_shared<const Node>(Node{Kind::Fun, std::move(symbol), {}, {}, {}}));
}

StTerm StTerm::var(Ident name) {
  return StTerm(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}, {}, {}}));
}

StTerm StTerm::p0(StTerm t) {
  return StTerm(std::make_shared<const Node>(Node{Kind::P0, {}, {}, {}, {std::move(t)}}));
}

StTerm StTerm::p1(StTerm t) {
  return StTerm(std::make_shared<const Node>(Node{Kind::P1, {}, {}, {}, {std::move(t)}}));
}

StTerm StTerm::comp(StTerm s, StTerm t) {
  return StTerm(std::make_shared<const Node>(Node{Kind::Comp, {}, {}, {}, {std::move(s), std::move(t)}}));
}

StTerm StTerm::inj0(StTerm t, StType other) {
  return StTerm(std::make_shared<const Node>(Node{Kind::Inj0, {}, std::move(other), {}, {std::move(t)}}));
}

StTerm StTerm::inj1(StTerm t, StType other) {
  return StTerm(std::make_shared<const Node>(Node{Kind::Inj1, {}, std::move(other), {}, {std::move(t)}}));
}

StTerm StTerm::elim(StTerm r, StTerm s, StTerm t) {
  return StTerm(
      std::make_shared<const Node>(Node{Kind::Elim, {}, {}, {}, {std::move(r), std::move(s), std::move(t)}}));
}

StTerm StTerm::lam(Ident x, StType param, StTerm body) {
  return StTerm(std::make_shared<const Node>(Node{Kind::Lam, std::move(x), std::move(param), {}, {std::move(body)}}));
}

StTerm StTerm::app(StTerm f, StTerm a) {
  return StTerm(std::make_shared<const Node>(Node{Kind::App, {}, {}, {}, {std::move(f), std::move(a)}}));
}

StTerm StTerm::ite(StateFormula cond, StTerm s, StTerm t) {
  return StTerm(
      std::make_shared<const Node>(Node{Kind::Ite, {}, {}, std::move(cond), {std::move(s), std::move(t)}}));
}

StTerm StTerm::rec(StTerm s, StTerm t) {
  return StTerm(std::make_shared<const Node>(Node{Kind::Rec, {}, {}, {}, {std::move(s), std::move(t)}}));
}

StTerm StTerm::while_loop(Ident hole, StateFormula cond, StTerm r, StTerm s, StTerm t, StTerm u) {
  return StTerm(std::make_shared<const Node>(Node{Kind::While, std::move(hole), {}, std::move(cond),
                                                  {std::move(r), std::move(s), std::move(t), std::move(u)}}));
}

StTerm::Kind StTerm::kind() const { return node_->kind; }
const Ident& StTerm::name() const { return node_->name; }
const StType& StTerm::type() const { return *node_->type; }
const StateFormula& StTerm::cond() const { return *node_->cond; }
const std::vector<StTerm>& StTerm::kids() const { return node_->kids; }

namespace {

StTerm make(TK k, Ident name, std::optional<StType> ty, std::optional<StateFormula> cond,
            std::vector<StTerm> kids) {
  switch (k) {
    case TK::Skip:
      return StTerm::skip();
    case TK::Default:
      return StTerm::default_of(*ty);
    case TK::Const:
      return StTerm::constant(name);
    case TK::Fun:
      return StTerm::fun(name);
    case TK::Var:
      return StTerm::var(name);
    case TK::P0:
      return StTerm::p0(kids[0]);
    case TK::P1:
      return StTerm::p1(kids[0]);
    case TK::Comp:
      return StTerm::comp(kids[0], kids[1]);
    case TK::Inj0:
      return StTerm::inj0(kids[0], *ty);
    case TK::Inj1:
      return StTerm::inj1(kids[0], *ty);
    case TK::Elim:
      return StTerm::elim(kids[0], kids[1], kids[2]);
    case TK::Lam:
      return StTerm::lam(name, *ty, kids[0]);
    case TK::App:
      return StTerm::app(kids[0], kids[1]);
    case TK::Ite:
      return StTerm::ite(*cond, kids[0], kids[1]);
    case TK::Rec:
      return StTerm::rec(kids[0], kids[1]);
    case TK::While:
      return StTerm::while_loop(name, *cond, kids[0], kids[1], kids[2], kids[3]);
  }
  throw Error("internal: bad term kind");
}

// Rebuild `t` with new children, keeping its own data.
StTerm with_kids(const StTerm& t, std::vector<StTerm> kids) {
  std::optional<StType> ty;
  if (t.kind() == TK::Default || t.kind() == TK::Lam || t.kind() == TK::Inj0 || t.kind() == TK::Inj1)
    ty = t.type();
  std::optional<StateFormula> cond;
  if (t.kind() == TK::Ite || t.kind() == TK::While) cond = t.cond();
  return make(t.kind(), t.name(), ty, cond, std::move(kids));
}

}  // namespace

StTerm star(StTerm s, StTerm t) { return StTerm::p1(StTerm::comp(std::move(s), std::move(t))); }

StTerm term_to_st(const Term& t) {
  if (t.is_var()) return StTerm::var(t.name());
  if (t.args().empty()) return StTerm::fun(t.name());
  StTerm arg = term_to_st(t.args().back());
  for (std::size_t i = t.args().size() - 1; i-- > 0;) arg = StTerm::comp(term_to_st(t.args()[i]), arg);
  return StTerm::app(StTerm::fun(t.name()), arg);
}

namespace {
bool flatten_args(const StTerm& a, std::size_t n, std::vector<Term>& out) {
  if (n == 1) {
    auto t = st_to_term(a);
    if (!t) return false;
    out.push_back(*t);
    return true;
  }
  if (a.kind() != TK::Comp) return false;
  auto h = st_to_term(a.kid(0));
  if (!h) return false;
  out.push_back(*h);
  return flatten_args(a.kid(1), n - 1, out);
}

std::size_t comp_width(const StTerm& a) {
  std::size_t n = 1;
  const StTerm* cur = &a;
  while (cur->kind() == TK::Comp) {
    ++n;
    cur = &cur->kid(1);
  }
  return n;
}
}  // namespace

std::optional<Term> st_to_term(const StTerm& t) {
  switch (t.kind()) {
    case TK::Var:
      return Term::var(t.name());
    case TK::Fun:
      return Term::app(t.name());
    case TK::App: {
      if (t.kid(0).kind() != TK::Fun) return std::nullopt;
      // The arity is not known here; take the full right spine of ∘.
      std::vector<Term> args;
      if (!flatten_args(t.kid(1), comp_width(t.kid(1)), args)) return std::nullopt;
      return Term::app(t.kid(0).name(), std::move(args));
    }
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Typing
// ---------------------------------------------------------------------------

StType function_symbol_type(int arity) {
  if (arity == 0) return StType::d();
  StType arg = StType::d();
  for (int i = 1; i < arity; ++i) arg = StType::prod(StType::d(), arg);
  return StType::arrow(arg, StType::d());
}

namespace {

void require_d_vars(const StateFormula& a, const TypingCtx& ctx, const Ident* hole, const char* what) {
  for (const auto& v : free_vars(a)) {
    if (hole && v == *hole) continue;
    auto it = ctx.find(v);
    if (it == ctx.end())
      throw TypeError(std::string(what) + " condition variable '" + v + "' is not in scope");
    if (!(it->second == StType::d()))
      throw TypeError(std::string(what) + " condition variable '" + v + "' must have type D, has " +
                      to_string(it->second));
  }
}

[[noreturn]] void mismatch(const std::string& where, const StType& expected, const StType& got) {
  throw TypeError(where + ": expected " + to_string(expected) + ", got " + to_string(got));
}

}  // namespace

StType typecheck(const TypingCtx& ctx, const StTerm& t, const StEnv& env) {
  switch (t.kind()) {
    case TK::Skip:
      return StType::c();
    case TK::Default:
      return t.type();
    case TK::Const: {
      auto it = env.constants.find(t.name());
      if (it == env.constants.end()) throw TypeError("unknown constant '" + t.name() + "'");
      return it->second;
    }
    case TK::Fun: {
      if (!env.sig) throw TypeError("no signature for function symbol '" + t.name() + "'");
      auto it = env.sig->functions.find(t.name());
      if (it == env.sig->functions.end()) throw TypeError("unknown function symbol '" + t.name() + "'");
      return function_symbol_type(it->second);
    }
    case TK::Var: {
      auto it = ctx.find(t.name());
      if (it == ctx.end()) throw TypeError("unbound variable '" + t.name() + "'");
      return it->second;
    }
    case TK::P0:
    case TK::P1: {
      StType a = typecheck(ctx, t.kid(0), env);
      if (a.kind() != StType::Kind::Prod)
        throw TypeError(std::string(t.kind() == TK::P0 ? "p0" : "p1") + ": expected a product, got " +
                        to_string(a));
      return t.kind() == TK::P0 ? a.left() : a.right();
    }
    case TK::Comp:
      return StType::prod(typecheck(ctx, t.kid(0), env), typecheck(ctx, t.kid(1), env));
    case TK::Inj0:
      return StType::sum(typecheck(ctx, t.kid(0), env), t.type());
    case TK::Inj1:
      return StType::sum(t.type(), typecheck(ctx, t.kid(0), env));
    case TK::Elim: {
      StType r = typecheck(ctx, t.kid(0), env);
      if (r.kind() != StType::Kind::Sum) throw TypeError("elim: scrutinee must be a sum, got " + to_string(r));
      StType s = typecheck(ctx, t.kid(1), env);
      StType u = typecheck(ctx, t.kid(2), env);
      if (s.kind() != StType::Kind::Arrow || !(s.left() == r.left()))
        mismatch("elim left branch", StType::arrow(r.left(), StType::c()), s);
      if (u.kind() != StType::Kind::Arrow || !(u.left() == r.right()))
        mismatch("elim right branch", StType::arrow(r.right(), s.right()), u);
      if (!(s.right() == u.right())) mismatch("elim branches", s.right(), u.right());
      return s.right();
    }
    case TK::Lam: {
      TypingCtx inner = ctx;
      inner.insert_or_assign(t.name(), t.type());
      return StType::arrow(t.type(), typecheck(inner, t.kid(0), env));
    }
    case TK::App: {
      StType f = typecheck(ctx, t.kid(0), env);
      if (f.kind() != StType::Kind::Arrow) throw TypeError("application of a non-function of type " + to_string(f));
      StType a = typecheck(ctx, t.kid(1), env);
      if (!(a == f.left())) mismatch("application argument", f.left(), a);
      return f.right();
    }
    case TK::Ite: {
      require_d_vars(t.cond(), ctx, nullptr, "if");
      StType s = typecheck(ctx, t.kid(0), env);
      StType u = typecheck(ctx, t.kid(1), env);
      if (!(s == u)) mismatch("if branches", s, u);
      return s;
    }
    case TK::Rec: {
      StType s = typecheck(ctx, t.kid(0), env);
      StType step = typecheck(ctx, t.kid(1), env);
      StType want = StType::arrow(StType::d(), StType::arrow(s, s));
      if (!(step == want)) mismatch("rec step", want, step);
      return StType::arrow(StType::d(), s);
    }
    case TK::While: {
      if (ctx.count(t.name())) throw TypeError("while: hole variable '" + t.name() + "' clashes with a variable in scope");
      require_d_vars(t.cond(), ctx, &t.name(), "while");
      StType h = typecheck(ctx, t.kid(2), env);
      if (h.kind() != StType::Kind::Arrow) throw TypeError("while: exit continuation must be a function, got " + to_string(h));
      const StType& x = h.left();
      const StType& y = h.right();
      StType r = typecheck(ctx, t.kid(0), env);
      StType want_r = StType::arrow(StType::d(), StType::arrow(x, x));
      if (!(r == want_r)) mismatch("while body", want_r, r);
      StType s = typecheck(ctx, t.kid(1), env);
      StType want_s = StType::arrow(StType::d(), StType::arrow(x, y));
      if (!(s == want_s)) mismatch("while exit branch", want_s, s);
      StType u = typecheck(ctx, t.kid(3), env);
      if (!(u == StType::d())) mismatch("while counter", StType::d(), u);
      return StType::arrow(x, y);
    }
  }
  throw TypeError("internal: bad term");
}

// ---------------------------------------------------------------------------
// Free variables and substitution
// ---------------------------------------------------------------------------

namespace {
void collect_st_free(const StTerm& t, VarSet& out) {
  switch (t.kind()) {
    case TK::Var:
      out.insert(t.name());
      return;
    case TK::Lam: {
      VarSet inner;
      collect_st_free(t.kid(0), inner);
      inner.erase(t.name());
      out.insert(inner.begin(), inner.end());
      return;
    }
    case TK::Ite:
      collect_free_vars(t.cond(), out);
      break;
    case TK::While: {
      VarSet c = free_vars(t.cond());
      c.erase(t.name());
      out.insert(c.begin(), c.end());
      break;
    }
    default:
      break;
  }
  for (const auto& k : t.kids()) collect_st_free(k, out);
}
}  // namespace

VarSet free_vars(const StTerm& t) {
  VarSet s;
  collect_st_free(t, s);
  return s;
}

StTerm subst(const StTerm& t, const Ident& x, const StTerm& by) {
  switch (t.kind()) {
    case TK::Var:
      return t.name() == x ? by : t;
    case TK::Skip:
    case TK::Default:
    case TK::Const:
    case TK::Fun:
      return t;
    case TK::Lam: {
      if (t.name() == x) return t;
      VarSet body_fv = free_vars(t.kid(0));
      if (!body_fv.count(x)) return t;
      VarSet by_fv = free_vars(by);
      Ident y = t.name();
      StTerm body = t.kid(0);
      if (by_fv.count(y)) {
        VarSet avoid = by_fv;
        avoid.insert(body_fv.begin(), body_fv.end());
        avoid.insert(x);
        Ident y2 = fresh_name(y, avoid);
        body = subst(body, y, StTerm::var(y2));
        y = y2;
      }
      return StTerm::lam(y, t.type(), subst(body, x, by));
    }
    default:
      break;
  }
  std::vector<StTerm> kids;
  for (const auto& k : t.kids()) kids.push_back(subst(k, x, by));
  if (t.kind() == TK::Ite || t.kind() == TK::While) {
    StateFormula cond = t.cond();
    Ident hole = t.kind() == TK::While ? t.name() : Ident{};
    VarSet cfv = free_vars(cond);
    if (t.kind() == TK::While) cfv.erase(hole);
    if (cfv.count(x)) {
      auto term = st_to_term(by);
      if (!term)
        throw Error("cannot substitute a non first-order term for '" + x + "' inside a state condition");
      if (t.kind() == TK::While) {
        VarSet tv = free_vars(*term);
        if (tv.count(hole)) {
          VarSet avoid = tv;
          avoid.insert(cfv.begin(), cfv.end());
          Ident h2 = fresh_name(hole, avoid);
          cond = hx::subst(cond, hole, Term::var(h2));
          hole = h2;
        }
      }
      cond = hx::subst(cond, x, *term);
    }
    if (t.kind() == TK::Ite) return StTerm::ite(cond, kids[0], kids[1]);
    return StTerm::while_loop(hole, cond, kids[0], kids[1], kids[2], kids[3]);
  }
  return with_kids(t, std::move(kids));
}

// ---------------------------------------------------------------------------
// Alpha equivalence
// ---------------------------------------------------------------------------

namespace {

struct Binders {
  std::vector<std::pair<Ident, Ident>> stack;
  bool match(const Ident& a, const Ident& b) const {
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      bool la = it->first == a, lb = it->second == b;
      if (la || lb) return la && lb;
    }
    return a == b;
  }
};

bool term_alpha(const Term& a, const Term& b, const Binders& env) {
  if (a.is_var() != b.is_var()) return false;
  if (a.is_var()) return env.match(a.name(), b.name());
  if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!term_alpha(a.args()[i], b.args()[i], env)) return false;
  return true;
}

bool sf_alpha(const StateFormula& a, const StateFormula& b, const Binders& env) {
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

bool st_alpha(const StTerm& a, const StTerm& b, Binders& env) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TK::Skip:
      return true;
    case TK::Default:
      return a.type() == b.type();
    case TK::Const:
    case TK::Fun:
      return a.name() == b.name();
    case TK::Var:
      return env.match(a.name(), b.name());
    case TK::Inj0:
    case TK::Inj1:
      if (!(a.type() == b.type())) return false;
      break;
    case TK::Lam: {
      if (!(a.type() == b.type())) return false;
      env.stack.emplace_back(a.name(), b.name());
      bool ok = st_alpha(a.kid(0), b.kid(0), env);
      env.stack.pop_back();
      return ok;
    }
    case TK::Ite:
      if (!sf_alpha(a.cond(), b.cond(), env)) return false;
      break;
    case TK::While: {
      env.stack.emplace_back(a.name(), b.name());
      bool ok = sf_alpha(a.cond(), b.cond(), env);
      env.stack.pop_back();
      if (!ok) return false;
      break;
    }
    default:
      break;
  }
  for (std::size_t i = 0; i < a.kids().size(); ++i)
    if (!st_alpha(a.kid(i), b.kid(i), env)) return false;
  return true;
}

}  // namespace

bool alpha_eq_st(const StTerm& a, const StTerm& b) {
  Binders env;
  return st_alpha(a, b, env);
}

// ---------------------------------------------------------------------------
// Unit simplification
// ---------------------------------------------------------------------------

StType simplify_units(const StType& t) {
  using K = StType::Kind;
  switch (t.kind()) {
    case K::D:
    case K::C:
      return t;
    case K::Prod: {
      StType l = simplify_units(t.left()), r = simplify_units(t.right());
      if (l.kind() == K::C) return r;
      if (r.kind() == K::C) return l;
      return StType::prod(l, r);
    }
    case K::Sum:
      return StType::sum(simplify_units(t.left()), simplify_units(t.right()));
    case K::Arrow: {
      StType a = simplify_units(t.left()), b = simplify_units(t.right());
      if (a.kind() == K::C) return b;
      return StType::arrow(a, b);
    }
  }
  return t;
}

namespace {

bool is_unit(const StType& t) { return simplify_units(t).kind() == StType::Kind::C; }

// Terms whose evaluation cannot touch the state.
bool is_pure(const StTerm& t) {
  switch (t.kind()) {
    case TK::Skip:
    case TK::Var:
    case TK::Fun:
    case TK::Lam:
    case TK::Default:
      return true;
    default:
      return false;
  }
}

// Evaluate e for its effects, then yield u.
StTerm then(const StTerm& e, const StTerm& u) { return is_pure(e) ? u : star(e, u); }

class Simplifier {
 public:
  explicit Simplifier(const StEnv& env) : env_(env) {}

  StTerm run(const StTerm& t, const TypingCtx& ctx) { return simp(t, ctx); }

 private:
  const StEnv& env_;
  int counter_ = 0;

  Ident fresh(const VarSet& avoid) { return fresh_name("v", avoid); }

  // e represents a value of type T; produce its ≃-simplified form.
  StTerm coerce(const StTerm& e, const StType& T) {
    using K = StType::Kind;
    if (simplify_units(T) == T) return e;
    switch (T.kind()) {
      case K::Prod: {
        if (is_unit(T.left())) return coerce(StTerm::p1(e), T.right());
        if (is_unit(T.right())) return coerce(StTerm::p0(e), T.left());
        Ident v = fresh(free_vars(e));
        StTerm body = StTerm::comp(coerce(StTerm::p0(StTerm::var(v)), T.left()),
                                   coerce(StTerm::p1(StTerm::var(v)), T.right()));
        return StTerm::app(StTerm::lam(v, T, body), e);
      }
      case K::Sum: {
        Ident v = fresh(free_vars(e));
        StType sl = simplify_units(T.left()), sr = simplify_units(T.right());
        return StTerm::elim(e, StTerm::lam(v, T.left(), StTerm::inj0(coerce(StTerm::var(v), T.left()), sr)),
                            StTerm::lam(v, T.right(), StTerm::inj1(coerce(StTerm::var(v), T.right()), sl)));
      }
      case K::Arrow: {
        if (is_unit(T.left())) return coerce(StTerm::app(e, StTerm::skip()), T.right());
        Ident v = fresh(free_vars(e));
        StType sa = simplify_units(T.left());
        return StTerm::lam(v, sa, coerce(StTerm::app(e, uncoerce(StTerm::var(v), T.left())), T.right()));
      }
      default:
        return e;
    }
  }

  // e is the simplified form of a value of type T; rebuild the original shape.
  StTerm uncoerce(const StTerm& e, const StType& T) {
    using K = StType::Kind;
    if (simplify_units(T) == T) return e;
    switch (T.kind()) {
      case K::Prod: {
        if (is_unit(T.left())) return StTerm::comp(uncoerce(StTerm::skip(), T.left()), uncoerce(e, T.right()));
        if (is_unit(T.right())) return StTerm::comp(uncoerce(e, T.left()), uncoerce(StTerm::skip(), T.right()));
        Ident v = fresh(free_vars(e));
        StTerm body = StTerm::comp(uncoerce(StTerm::p0(StTerm::var(v)), T.left()),
                                   uncoerce(StTerm::p1(StTerm::var(v)), T.right()));
        return StTerm::app(StTerm::lam(v, simplify_units(T), body), e);
      }
      case K::Sum: {
        Ident v = fresh(free_vars(e));
        return StTerm::elim(
            e, StTerm::lam(v, simplify_units(T.left()), StTerm::inj0(uncoerce(StTerm::var(v), T.left()), T.right())),
            StTerm::lam(v, simplify_units(T.right()), StTerm::inj1(uncoerce(StTerm::var(v), T.right()), T.left())));
      }
      case K::Arrow: {
        Ident v = fresh(free_vars(e));
        if (is_unit(T.left())) return StTerm::lam(v, T.left(), uncoerce(e, T.right()));
        return StTerm::lam(v, T.left(), uncoerce(StTerm::app(e, coerce(StTerm::var(v), T.left())), T.right()));
      }
      case K::C:
        return StTerm::skip();
      default:
        return e;
    }
  }

  StType type_of(const StTerm& t, const TypingCtx& ctx) { return typecheck(ctx, t, env_); }

  StTerm simp(const StTerm& t, const TypingCtx& ctx) {
    switch (t.kind()) {
      case TK::Skip:
      case TK::Fun:
        return t;
      case TK::Default:
        return StTerm::default_of(simplify_units(t.type()));
      case TK::Var: {
        auto it = ctx.find(t.name());
        if (it != ctx.end() && is_unit(it->second)) return StTerm::skip();
        return t;
      }
      case TK::Const:
        return coerce(t, type_of(t, ctx));
      case TK::P0:
      case TK::P1: {
        StType pt = type_of(t.kid(0), ctx);
        StTerm e = simp(t.kid(0), ctx);
        bool lu = is_unit(pt.left()), ru = is_unit(pt.right());
        bool want_left = t.kind() == TK::P0;
        if (want_left ? lu : ru) {
          if (is_pure(e)) return StTerm::skip();
          if (lu && ru) return e;
          return StTerm::p1(StTerm::comp(e, StTerm::skip()));
        }
        if (want_left ? ru : lu) return e;
        return want_left ? StTerm::p0(e) : StTerm::p1(e);
      }
      case TK::Comp: {
        StType a = type_of(t.kid(0), ctx), b = type_of(t.kid(1), ctx);
        StTerm s = simp(t.kid(0), ctx), u = simp(t.kid(1), ctx);
        if (is_unit(a)) return then(s, u);
        if (is_unit(b)) return is_pure(u) ? s : StTerm::p0(StTerm::comp(s, u));
        return StTerm::comp(s, u);
      }
      case TK::Inj0:
        return StTerm::inj0(simp(t.kid(0), ctx), simplify_units(t.type()));
      case TK::Inj1:
        return StTerm::inj1(simp(t.kid(0), ctx), simplify_units(t.type()));
      case TK::Elim: {
        StType rt = type_of(t.kid(0), ctx);
        StTerm r = simp(t.kid(0), ctx);
        StTerm s = simp(t.kid(1), ctx), u = simp(t.kid(2), ctx);
        VarSet avoid = free_vars(s);
        auto uf = free_vars(u);
        avoid.insert(uf.begin(), uf.end());
        if (is_unit(rt.left())) s = StTerm::lam(fresh(avoid), StType::c(), s);
        if (is_unit(rt.right())) u = StTerm::lam(fresh(avoid), StType::c(), u);
        return StTerm::elim(r, s, u);
      }
      case TK::Lam: {
        TypingCtx inner = ctx;
        inner.insert_or_assign(t.name(), t.type());
        StTerm body = simp(t.kid(0), inner);
        if (is_unit(t.type())) return body;
        return StTerm::lam(t.name(), simplify_units(t.type()), body);
      }
      case TK::App: {
        StType ft = type_of(t.kid(0), ctx);
        StTerm f = simp(t.kid(0), ctx), a = simp(t.kid(1), ctx);
        if (is_unit(ft.left())) return is_pure(a) ? f : StTerm::p0(StTerm::comp(f, a));
        return StTerm::app(f, a);
      }
      case TK::Ite:
        return StTerm::ite(t.cond(), simp(t.kid(0), ctx), simp(t.kid(1), ctx));
      case TK::Rec:
      case TK::While: {
        // Children are simplified, then restored to the shape the node's
        // typing rule needs; the node itself is coerced as a whole.
        std::vector<StTerm> kids;
        for (const auto& k : t.kids()) kids.push_back(uncoerce(simp(k, ctx), type_of(k, ctx)));
        StTerm node = with_kids(t, std::move(kids));
        return coerce(node, type_of(t, ctx));
      }
    }
    return t;
  }
};

}  // namespace

StTerm simplify_units(const StTerm& t, const TypingCtx& ctx, const StEnv& env) {
  Simplifier s(env);
  return s.run(t, ctx);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

std::string to_string(const StType& t, Notation n) {
  using K = StType::Kind;
  const bool u = n == Notation::Unicode;
  auto wrap = [&](const StType& x, bool cond) {
    std::string s = to_string(x, n);
    return cond ? "(" + s + ")" : s;
  };
  switch (t.kind()) {
    case K::D:
      return "D";
    case K::C:
      return "C";
    case K::Prod:
      return wrap(t.left(), t.left().kind() >= K::Prod) + (u ? " × " : " * ") +
             wrap(t.right(), t.right().kind() >= K::Sum);
    case K::Sum:
      return wrap(t.left(), t.left().kind() >= K::Sum) + " + " + wrap(t.right(), t.right().kind() == K::Arrow);
    case K::Arrow:
      return wrap(t.left(), t.left().kind() == K::Arrow) + (u ? " → " : " -> ") + to_string(t.right(), n);
  }
  return "?";
}

namespace {

// Precedence: 0 binder-like (fun/if extend right), 1 application, 2 atomic.
int st_prec(const StTerm& t) {
  switch (t.kind()) {
    case TK::Lam:
    case TK::Ite:
      return 0;
    case TK::App:
      return 1;
    default:
      return 2;
  }
}

std::string st_str(const StTerm& t, const StPrintOptions& o);

std::string st_wrap(const StTerm& t, int min_prec, const StPrintOptions& o) {
  std::string s = st_str(t, o);
  return st_prec(t) < min_prec ? "(" + s + ")" : s;
}

bool is_star(const StTerm& t) { return t.kind() == TK::P1 && t.kid(0).kind() == TK::Comp; }

std::string st_str(const StTerm& t, const StPrintOptions& o) {
  const bool u = o.notation == Notation::Unicode;
  switch (t.kind()) {
    case TK::Skip:
      return "skip";
    case TK::Default:
      return "default[" + to_string(t.type(), o.notation) + "]";
    case TK::Const:
    case TK::Fun:
    case TK::Var:
      return t.name();
    case TK::P0:
      return "p0(" + st_str(t.kid(0), o) + ")";
    case TK::P1:
      if (is_star(t))
        return "(" + st_wrap(t.kid(0).kid(0), 1, o) + (u ? " ∗ " : " * ") + st_wrap(t.kid(0).kid(1), 1, o) + ")";
      return "p1(" + st_str(t.kid(0), o) + ")";
    case TK::Comp:
      if (u) return "(" + st_wrap(t.kid(0), 1, o) + " ∘ " + st_wrap(t.kid(1), 1, o) + ")";
      return "<" + st_str(t.kid(0), o) + ", " + st_str(t.kid(1), o) + ">";
    case TK::Inj0:
    case TK::Inj1: {
      std::string name = t.kind() == TK::Inj0 ? (u ? "ι0" : "inl") : (u ? "ι1" : "inr");
      return name + "[" + to_string(t.type(), o.notation) + "](" + st_str(t.kid(0), o) + ")";
    }
    case TK::Elim:
      return "elim(" + st_str(t.kid(0), o) + ", " + st_str(t.kid(1), o) + ", " + st_str(t.kid(2), o) + ")";
    case TK::Lam: {
      std::string param = o.show_types ? "(" + t.name() + " : " + to_string(t.type(), o.notation) + ")" : t.name();
      if (u) return "λ" + param + "." + st_str(t.kid(0), o);
      return "fun " + param + " -> " + st_str(t.kid(0), o);
    }
    case TK::App:
      // `pred` is also a declaration keyword; the parser reads it as the symbol only before "(".
      if (t.kid(0).kind() == TK::Fun && t.kid(0).name() == "pred") return "pred(" + st_str(t.kid(1), o) + ")";
      return st_wrap(t.kid(0), 1, o) + " " + st_wrap(t.kid(1), 2, o);
    case TK::Ite:
      return "if " + to_string(t.cond(), o.notation) + " then " + st_wrap(t.kid(0), 1, o) + " else " +
             st_str(t.kid(1), o);
    case TK::Rec:
      return "rec(" + st_str(t.kid(0), o) + ", " + st_str(t.kid(1), o) + ")";
    case TK::While:
      return "while[" + t.name() + ". " + to_string(t.cond(), o.notation) + "](" + st_str(t.kid(0), o) + ", " +
             st_str(t.kid(1), o) + ", " + st_str(t.kid(2), o) + ", " + st_str(t.kid(3), o) + ")";
  }
  return "?";
}

}  // namespace

std::string to_string(const StTerm& t, const StPrintOptions& o) { return st_str(t, o); }

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

json to_json(const Term& t) {
  if (t.is_var()) return {{"var", t.name()}};
  json args = json::array();
  for (const auto& a : t.args()) args.push_back(to_json(a));
  return {{"fun", t.name()}, {"args", args}};
}

Term term_from_json(const json& j) {
  if (j.contains("var")) return Term::var(j.at("var").get<std::string>());
  std::vector<Term> args;
  for (const auto& a : j.at("args")) args.push_back(term_from_json(a));
  return Term::app(j.at("fun").get<std::string>(), std::move(args));
}

json to_json(const StateFormula& a) {
  using K = StateFormula::Kind;
  switch (a.kind()) {
    case K::Top:
      return {{"kind", "true"}};
    case K::Bot:
      return {{"kind", "false"}};
    case K::Atom: {
      json args = json::array();
      for (const auto& t : a.args()) args.push_back(to_json(t));
      return {{"kind", "atom"}, {"pred", a.pred()}, {"args", args}};
    }
    case K::And:
      return {{"kind", "and"}, {"l", to_json(a.lhs())}, {"r", to_json(a.rhs())}};
    case K::Or:
      return {{"kind", "or"}, {"l", to_json(a.lhs())}, {"r", to_json(a.rhs())}};
    case K::Imp:
      return {{"kind", "imp"}, {"l", to_json(a.lhs())}, {"r", to_json(a.rhs())}};
  }
  return nullptr;
}

StateFormula state_formula_from_json(const json& j) {
  const std::string k = j.at("kind").get<std::string>();
  if (k == "true") return StateFormula::top();
  if (k == "false") return StateFormula::bot();
  if (k == "atom") {
    std::vector<Term> args;
    for (const auto& a : j.at("args")) args.push_back(term_from_json(a));
    return StateFormula::atom(j.at("pred").get<std::string>(), std::move(args));
  }
  auto l = state_formula_from_json(j.at("l")), r = state_formula_from_json(j.at("r"));
  if (k == "and") return StateFormula::conj(l, r);
  if (k == "or") return StateFormula::disj(l, r);
  if (k == "imp") return StateFormula::imp(l, r);
  throw Error("bad state formula kind '" + k + "' in JSON");
}

json to_json(const StType& t) {
  using K = StType::Kind;
  switch (t.kind()) {
    case K::D:
      return "D";
    case K::C:
      return "C";
    case K::Prod:
      return {{"prod", {to_json(t.left()), to_json(t.right())}}};
    case K::Sum:
      return {{"sum", {to_json(t.left()), to_json(t.right())}}};
    case K::Arrow:
      return {{"arrow", {to_json(t.left()), to_json(t.right())}}};
  }
  return nullptr;
}

StType type_from_json(const json& j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "D" || s == "nat") return StType::d();
    if (s == "C") return StType::c();
    throw Error("bad type '" + s + "' in JSON");
  }
  if (j.contains("prod")) return StType::prod(type_from_json(j["prod"][0]), type_from_json(j["prod"][1]));
  if (j.contains("sum")) return StType::sum(type_from_json(j["sum"][0]), type_from_json(j["sum"][1]));
  if (j.contains("arrow")) return StType::arrow(type_from_json(j["arrow"][0]), type_from_json(j["arrow"][1]));
  throw Error("bad type in JSON");
}

json to_json(const StTerm& t) {
  auto k = [&](std::size_t i) { return to_json(t.kid(i)); };
  switch (t.kind()) {
    case TK::Skip:
      return {{"kind", "skip"}};
    case TK::Default:
      return {{"kind", "default"}, {"type", to_json(t.type())}};
    case TK::Const:
      return {{"kind", "const"}, {"name", t.name()}};
    case TK::Fun:
      return {{"kind", "fun"}, {"name", t.name()}};
    case TK::Var:
      return {{"kind", "var"}, {"name", t.name()}};
    case TK::P0:
      return {{"kind", "p0"}, {"t", k(0)}};
    case TK::P1:
      return {{"kind", "p1"}, {"t", k(0)}};
    case TK::Comp:
      return {{"kind", "comp"}, {"s", k(0)}, {"t", k(1)}};
    case TK::Inj0:
      return {{"kind", "inj0"}, {"other", to_json(t.type())}, {"t", k(0)}};
    case TK::Inj1:
      return {{"kind", "inj1"}, {"other", to_json(t.type())}, {"t", k(0)}};
    case TK::Elim:
      return {{"kind", "elim"}, {"r", k(0)}, {"s", k(1)}, {"t", k(2)}};
    case TK::Lam:
      return {{"kind", "lam"}, {"var", t.name()}, {"type", to_json(t.type())}, {"body", k(0)}};
    case TK::App:
      return {{"kind", "app"}, {"f", k(0)}, {"arg", k(1)}};
    case TK::Ite:
      return {{"kind", "ite"}, {"cond", to_json(t.cond())}, {"then", k(0)}, {"else", k(1)}};
    case TK::Rec:
      return {{"kind", "rec"}, {"s", k(0)}, {"t", k(1)}};
    case TK::While:
      return {{"kind", "while"}, {"hole", t.name()}, {"cond", to_json(t.cond())},
              {"r", k(0)},       {"s", k(1)},        {"t", k(2)},
              {"u", k(3)}};
  }
  return nullptr;
}

StTerm st_from_json(const json& j) {
  const std::string k = j.at("kind").get<std::string>();
  auto sub = [&](const char* key) { return st_from_json(j.at(key)); };
  if (k == "skip") return StTerm::skip();
  if (k == "default") return StTerm::default_of(type_from_json(j.at("type")));
  if (k == "const") return StTerm::constant(j.at("name").get<std::string>());
  if (k == "fun") return StTerm::fun(j.at("name").get<std::string>());
  if (k == "var") return StTerm::var(j.at("name").get<std::string>());
  if (k == "p0") return StTerm::p0(sub("t"));
  if (k == "p1") return StTerm::p1(sub("t"));
  if (k == "comp") return StTerm::comp(sub("s"), sub("t"));
  if (k == "inj0") return StTerm::inj0(sub("t"), type_from_json(j.at("other")));
  if (k == "inj1") return StTerm::inj1(sub("t"), type_from_json(j.at("other")));
  if (k == "elim") return StTerm::elim(sub("r"), sub("s"), sub("t"));
  if (k == "lam") return StTerm::lam(j.at("var").get<std::string>(), type_from_json(j.at("type")), sub("body"));
  if (k == "app") return StTerm::app(sub("f"), sub("arg"));
  if (k == "ite") return StTerm::ite(state_formula_from_json(j.at("cond")), sub("then"), sub("else"));
  if (k == "rec") return StTerm::rec(sub("s"), sub("t"));
  if (k == "while")
    return StTerm::while_loop(j.at("hole").get<std::string>(), state_formula_from_json(j.at("cond")), sub("r"),
                              sub("s"), sub("t"), sub("u"));
  throw Error("bad term kind '" + k + "' in JSON");
}

}  // namespace hx
