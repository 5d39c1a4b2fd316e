#include "hx/print.hpp"

namespace hx {

namespace {

bool is_infix_atom(const Ident& pred, std::size_t arity) {
  return arity == 2 && (pred == "le" || pred == "eq");
}

std::string infix_symbol(const Ident& pred, Notation n) {
  if (pred == "eq") return " = ";
  return n == Notation::Unicode ? " ≤ " : " <= ";
}

std::string args_string(std::span<const Term> args, Notation n) {
  std::string s = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ", ";
    s += to_string(args[i], n);
  }
  return s + ")";
}

// Terms that need parentheses when they appear as the left side of "+ k".
bool is_compound_sum(const Term& t) {
  if (t.is_var() || as_numeral(t)) return false;
  return t.name() == "succ";
}

std::string atom_string(const Ident& pred, std::span<const Term> args, Notation n) {
  if (is_infix_atom(pred, args.size()))
    return to_string(args[0], n) + infix_symbol(pred, n) + to_string(args[1], n);
  if (args.empty()) return pred;
  return pred + args_string(args, n);
}

// Precedence levels for state formulas: 0 imp, 1 or, 2 and, 3 atomic/neg.
int sf_prec(const StateFormula& a) {
  using K = StateFormula::Kind;
  switch (a.kind()) {
    case K::Imp:
      return a.rhs().kind() == K::Bot ? 3 : 0;
    case K::Or:
      return 1;
    case K::And:
      return 2;
    default:
      return 3;
  }
}

std::string sf_string(const StateFormula& a, Notation n);

std::string sf_wrap(const StateFormula& a, int min_prec, Notation n) {
  std::string s = sf_string(a, n);
  if (sf_prec(a) < min_prec) return "(" + s + ")";
  return s;
}

std::string sf_string(const StateFormula& a, Notation n) {
  using K = StateFormula::Kind;
  const bool u = n == Notation::Unicode;
  switch (a.kind()) {
    case K::Top:
      return u ? "⊤" : "true";
    case K::Bot:
      return u ? "⊥" : "false";
    case K::Atom:
      return atom_string(a.pred(), a.args(), n);
    case K::And:
      return sf_wrap(a.lhs(), 3, n) + (u ? " ∧ " : " /\\ ") + sf_wrap(a.rhs(), 2, n);
    case K::Or:
      return sf_wrap(a.lhs(), 2, n) + (u ? " ∨ " : " \\/ ") + sf_wrap(a.rhs(), 1, n);
    case K::Imp:
      if (a.rhs().kind() == K::Bot) return (u ? "¬" : "~") + sf_wrap(a.lhs(), 3, n);
      return sf_wrap(a.lhs(), 1, n) + (u ? " → " : " -> ") + sf_wrap(a.rhs(), 0, n);
  }
  return "?";
}

// Main formula precedence: 0 binders (ex/all, extend right), 1 imp, 2 or, 3 and, 4 atomic.
int mf_prec(const MainFormula& a) {
  using K = MainFormula::Kind;
  switch (a.kind()) {
    case K::Exists:
    case K::ForallTriple:
      return 0;
    case K::ImpTriple:
      return 1;
    case K::Or:
      return 2;
    case K::And:
      return 3;
    default:
      return 4;
  }
}

std::string mf_string(const MainFormula& a, Notation n);

std::string mf_wrap(const MainFormula& a, int min_prec, Notation n) {
  std::string s = mf_string(a, n);
  if (mf_prec(a) < min_prec) return "(" + s + ")";
  return s;
}

std::string triple_string(const Triple& t, Notation n) {
  if (n == Notation::Unicode)
    return "⟨" + sf_string(t.pre, n) + "⟩" + mf_string(t.body, n) + "⟨" + sf_string(t.post, n) + "⟩";
  return "{" + sf_string(t.pre, n) + "} " + mf_string(t.body, n) + " {" + sf_string(t.post, n) + "}";
}

std::string mf_string(const MainFormula& a, Notation n) {
  using K = MainFormula::Kind;
  const bool u = n == Notation::Unicode;
  switch (a.kind()) {
    case K::Top:
      return u ? "⊤" : "true";
    case K::Bot:
      return u ? "⊥" : "false";
    case K::Atom:
      return atom_string(a.pred(), a.args(), n);
    case K::And:
      return mf_wrap(a.lhs(), 4, n) + (u ? " ∧ " : " /\\ ") + mf_wrap(a.rhs(), 3, n);
    case K::Or:
      return mf_wrap(a.lhs(), 3, n) + (u ? " ∨ " : " \\/ ") + mf_wrap(a.rhs(), 2, n);
    case K::Exists:
      return (u ? "∃" : "ex ") + a.var() + ". " + mf_string(a.body(), n);
    case K::ForallTriple:
      return (u ? "∀" : "all ") + a.var() + (u ? "" : ". ") + triple_string(a.triple(), n);
    case K::ImpTriple:
      return mf_wrap(a.antecedent(), 2, n) + (u ? " ⇒ " : " => ") + triple_string(a.triple(), n);
  }
  return "?";
}

}  // namespace

std::string to_string(const Term& t, Notation n) {
  if (t.is_var()) return t.name();
  if (auto k = as_numeral(t)) return std::to_string(*k);
  if (t.name() == "succ" && t.args().size() == 1) {
    std::uint64_t k = 0;
    const Term* cur = &t;
    while (!cur->is_var() && cur->name() == "succ" && cur->args().size() == 1 && !as_numeral(*cur)) {
      ++k;
      cur = &cur->args()[0];
    }
    std::string base = to_string(*cur, n);
    if (is_compound_sum(*cur)) base = "(" + base + ")";
    return base + " + " + std::to_string(k);
  }
  if (t.args().empty()) return t.name();
  return t.name() + args_string(t.args(), n);
}

std::string to_string(const StateFormula& a, Notation n) { return sf_string(a, n); }
std::string to_string(const MainFormula& a, Notation n) { return mf_string(a, n); }
std::string to_string(const Triple& t, Notation n) { return triple_string(t, n); }

std::string to_string(const Context& ctx, const Triple& t, Notation n) {
  std::string s;
  for (std::size_t i = 0; i < ctx.entries().size(); ++i) {
    if (i) s += ", ";
    s += ctx.entries()[i].label + ": " + to_string(ctx.entries()[i].formula, n);
  }
  if (!s.empty()) s += " ";
  s += n == Notation::Unicode ? "⊢_S " : "|- ";
  return s + triple_string(t, n);
}

std::string state_sequent_string(const std::vector<StateFormula>& hyps, const StateFormula& goal, Notation n) {
  std::string s;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    if (i) s += ", ";
    s += sf_string(hyps[i], n);
  }
  if (!s.empty()) s += " ";
  s += n == Notation::Unicode ? "⊢_H " : "|- ";
  return s + sf_string(goal, n);
}

}  // namespace hx
