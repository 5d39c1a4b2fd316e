#include "hx/extract.hpp"

namespace hx {

StTerm extract(const Derivation& d, const Theory& th, const Context& ctx) {
  return check_and_extract(d, th, ctx).realizer;
}

TypingCtx extraction_context(const StTerm& t, const Context& ctx) {
  TypingCtx out = real_context(ctx);
  for (const auto& v : free_vars(t))
    if (!out.count(v)) out.emplace(v, StType::d());
  return out;
}

StTerm free_var_ground(const StTerm& t, const Theory& th, const TypingCtx& ctx) {
  TypingCtx full = ctx;
  std::vector<Ident> stray;
  for (const auto& v : free_vars(t))
    if (!ctx.count(v)) {
      stray.push_back(v);
      full.emplace(v, StType::d());
    }
  if (stray.empty()) return t;
  try {
    typecheck(full, t, th.st_env());
  } catch (const TypeError& e) {
    throw Error(std::string("cannot ground free variables at type D: ") + e.what());
  }
  StTerm c = term_to_st(Term::app(th.sig.canonical_constant));
  StTerm out = t;
  for (const auto& v : stray) out = subst(out, v, c);
  return out;
}

namespace {

using SK = StTerm::Kind;

bool pure(const StTerm& t) {
  switch (t.kind()) {
    case SK::Skip:
    case SK::Var:
    case SK::Fun:
    case SK::Lam:
    case SK::Default: return true;
    case SK::Comp: return pure(t.kid(0)) && pure(t.kid(1));
    case SK::App: return t.kid(0).kind() == SK::Fun && pure(t.kid(1));
    default: return false;
  }
}

bool is_var(const StTerm& t, const Ident& v) { return t.kind() == SK::Var && t.name() == v; }

StTerm rebuild(const StTerm& t, std::vector<StTerm> k) {
  switch (t.kind()) {
    case SK::Skip:
    case SK::Default:
    case SK::Const:
    case SK::Fun:
    case SK::Var: return t;
    case SK::P0: return StTerm::p0(k[0]);
    case SK::P1: return StTerm::p1(k[0]);
    case SK::Comp: return StTerm::comp(k[0], k[1]);
    case SK::Inj0: return StTerm::inj0(k[0], t.type());
    case SK::Inj1: return StTerm::inj1(k[0], t.type());
    case SK::Elim: return StTerm::elim(k[0], k[1], k[2]);
    case SK::Lam: return StTerm::lam(t.name(), t.type(), k[0]);
    case SK::App: return StTerm::app(k[0], k[1]);
    case SK::Ite: return StTerm::ite(t.cond(), k[0], k[1]);
    case SK::Rec: return StTerm::rec(k[0], k[1]);
    case SK::While: return StTerm::while_loop(t.name(), t.cond(), k[0], k[1], k[2], k[3]);
  }
  return t;
}

/// Matches (λv.(λy.λu.b)(p0 v)(p1 v)) s and returns b[s0/y][s1/u] when s = s0∘s1 is pure.
std::optional<StTerm> contract_curry(const StTerm& t) {
  if (t.kind() != SK::App) return std::nullopt;
  const StTerm& f = t.kid(0);
  const StTerm& s = t.kid(1);
  if (f.kind() != SK::Lam) return std::nullopt;
  const Ident& v = f.name();
  const StTerm& outer = f.kid(0);
  if (outer.kind() != SK::App || !(outer.kid(1).kind() == SK::P1 && is_var(outer.kid(1).kid(0), v)))
    return std::nullopt;
  const StTerm& inner = outer.kid(0);
  if (inner.kind() != SK::App || !(inner.kid(1).kind() == SK::P0 && is_var(inner.kid(1).kid(0), v)))
    return std::nullopt;
  const StTerm& ly = inner.kid(0);
  if (ly.kind() != SK::Lam || ly.kid(0).kind() != SK::Lam) return std::nullopt;
  const StTerm& lu = ly.kid(0);
  if (free_vars(lu.kid(0)).count(v)) return std::nullopt;
  if (s.kind() != SK::Comp || !pure(s.kid(0)) || !pure(s.kid(1))) return std::nullopt;
  // Parallel substitution through a placeholder for y.
  VarSet avoid = free_vars(lu.kid(0));
  for (const auto& w : free_vars(s)) avoid.insert(w);
  Ident ph = fresh_name("y_", avoid);
  try {
    StTerm body = subst(lu.kid(0), ly.name(), StTerm::var(ph));
    body = subst(body, lu.name(), s.kid(1));
    return subst(body, ph, s.kid(0));
  } catch (const Error&) {
    // A loop or branch condition mentions y and s0 is not a first-order term.
    return std::nullopt;
  }
}

}  // namespace

StTerm cleanup_admin(const StTerm& t) {
  std::vector<StTerm> kids;
  kids.reserve(t.kids().size());
  for (const auto& k : t.kids()) kids.push_back(cleanup_admin(k));
  StTerm r = rebuild(t, std::move(kids));
  if (auto c = contract_curry(r)) return cleanup_admin(*c);
  if (r.kind() == SK::P1 && r.kid(0).kind() == SK::Comp && r.kid(0).kid(0).kind() == SK::Skip)
    return r.kid(0).kid(1);
  if (r.kind() == SK::P0 && r.kid(0).kind() == SK::Comp && r.kid(0).kid(1).kind() == SK::Skip)
    return r.kid(0).kid(0);
  return r;
}

}  // namespace hx
