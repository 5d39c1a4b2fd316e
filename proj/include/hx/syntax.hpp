#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hx {

using Ident = std::string;
using VarSet = std::set<Ident>;

/// Base class for all structured errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

/// First-order term: a variable or a function symbol applied to arguments.
/// Immutable; copies share structure.
class Term {
 public:
  enum class Kind { Var, App };

  static Term var(Ident name);
  static Term app(Ident symbol, std::vector<Term> args = {});

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  /// Variable name or function symbol.
  const Ident& name() const;
  std::span<const Term> args() const;

  bool operator==(const Term& other) const;
  bool operator<(const Term& other) const;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  int compare(const Term& other) const;
  std::shared_ptr<const Node> node_;
};

/// succ^k(0); the SA representation of a numeral.
Term numeral(std::uint64_t k);
/// succ^k(base).
Term succ_n(Term base, std::uint64_t k);
/// Returns k if t is succ^k(0).
std::optional<std::uint64_t> as_numeral(const Term& t);

// ---------------------------------------------------------------------------
// State formulas (propositional layer over state predicates)
// ---------------------------------------------------------------------------

class StateFormula {
 public:
  enum class Kind { Top, Bot, Atom, And, Or, Imp };

  static StateFormula top();
  static StateFormula bot();
  static StateFormula atom(Ident pred, std::vector<Term> args = {});
  static StateFormula conj(StateFormula l, StateFormula r);
  static StateFormula disj(StateFormula l, StateFormula r);
  static StateFormula imp(StateFormula l, StateFormula r);
  /// Negation is implication into falsity.
  static StateFormula neg(StateFormula a) { return imp(std::move(a), bot()); }

  Kind kind() const;
  const Ident& pred() const;
  std::span<const Term> args() const;
  const StateFormula& lhs() const;
  const StateFormula& rhs() const;

  bool operator==(const StateFormula& other) const;
  bool operator<(const StateFormula& other) const;

 private:
  struct Node;
  explicit StateFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Main formulas and triples
// ---------------------------------------------------------------------------

class MainFormula;

struct Triple;

class MainFormula {
 public:
  enum class Kind { Top, Bot, Atom, And, Or, Exists, ImpTriple, ForallTriple };

  static MainFormula top();
  static MainFormula bot();
  static MainFormula atom(Ident pred, std::vector<Term> args = {});
  static MainFormula conj(MainFormula l, MainFormula r);
  static MainFormula disj(MainFormula l, MainFormula r);
  static MainFormula exists(Ident var, MainFormula body);
  static MainFormula imp(MainFormula antecedent, Triple consequent);
  static MainFormula forall(Ident var, Triple body);

  Kind kind() const;
  const Ident& pred() const;
  std::span<const Term> args() const;
  const MainFormula& lhs() const;
  const MainFormula& rhs() const;
  /// Bound variable of Exists / ForallTriple.
  const Ident& var() const;
  /// Body of Exists.
  const MainFormula& body() const;
  /// Antecedent of ImpTriple.
  const MainFormula& antecedent() const;
  /// Triple of ImpTriple / ForallTriple.
  const Triple& triple() const;

  /// Structural (not alpha) equality.
  bool operator==(const MainFormula& other) const;

 private:
  struct Node;
  explicit MainFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Triple {
  StateFormula pre;
  MainFormula body;
  StateFormula post;

  bool operator==(const Triple& other) const = default;
};

struct Hypothesis {
  Ident label;
  MainFormula formula;
};

/// Ordered, labelled assumptions.
class Context {
 public:
  Context() = default;
  explicit Context(std::vector<Hypothesis> hyps);

  const std::vector<Hypothesis>& entries() const { return hyps_; }
  bool empty() const { return hyps_.empty(); }
  const MainFormula* find(const Ident& label) const;
  bool contains(const Ident& label) const { return find(label) != nullptr; }
  /// Throws if the label is already present.
  Context extended(const Ident& label, MainFormula formula) const;
  /// Copy with `label` rebound (or added when absent).
  Context replaced(const Ident& label, MainFormula formula) const;
  Context without(const Ident& label) const;
  VarSet free_vars() const;

 private:
  std::vector<Hypothesis> hyps_;
};

enum class Mode { SL, SA };

/// Function, predicate and state-predicate symbols with arities.
struct Signature {
  Mode mode = Mode::SL;
  std::map<Ident, int> functions;
  std::map<Ident, int> predicates;
  std::map<Ident, int> state_predicates;
  /// The distinguished constant c : D (0 in SA mode).
  Ident canonical_constant;

  /// Signature preloaded with 0, succ, add, mul, pred and equality.
  static Signature arithmetic();

  void add_function(const Ident& f, int arity);
  void add_predicate(const Ident& p, int arity);
  void add_state_predicate(const Ident& p, int arity);

  /// Throws Error naming the first ill-formed symbol use.
  void check(const Term& t) const;
  void check(const StateFormula& a) const;
  void check(const MainFormula& a) const;
};

// ---------------------------------------------------------------------------
// Free variables, substitution, alpha-equivalence
// ---------------------------------------------------------------------------

VarSet free_vars(const Term& t);
VarSet free_vars(const StateFormula& a);
VarSet free_vars(const MainFormula& a);
VarSet free_vars(const Triple& t);
void collect_free_vars(const Term& t, VarSet& out);
void collect_free_vars(const StateFormula& a, VarSet& out);
void collect_free_vars(const MainFormula& a, VarSet& out);

/// `base` if unused, otherwise base1, base2, ... (first not in `avoid`).
Ident fresh_name(const Ident& base, const VarSet& avoid);

Term subst(const Term& t, const Ident& var, const Term& by);
StateFormula subst(const StateFormula& a, const Ident& var, const Term& by);
/// Capture-avoiding.
MainFormula subst(const MainFormula& a, const Ident& var, const Term& by);
Triple subst(const Triple& t, const Ident& var, const Term& by);

/// Replace every occurrence of term `from` by `to` (syntactic, no binders
/// are crossed for state formulas).
StateFormula replace_term(const StateFormula& a, const Term& from, const Term& to);

bool alpha_eq(const MainFormula& a, const MainFormula& b);
bool alpha_eq(const Triple& a, const Triple& b);

bool occurs_free(const Ident& v, const MainFormula& a);

}  // namespace hx
