#pragma once

#include <string>

#include "hx/derivation.hpp"
#include "hx/st.hpp"
#include "hx/syntax.hpp"
#include "hx/theory.hpp"

namespace hx {

/// Γ ⊢_S ⟨α⟩A⟨β⟩
struct SSequent {
  Context ctx;
  Triple triple;
};

class KernelError : public Error {
 public:
  enum class Kind { RuleMismatch, Eigenvariable, StateMismatch, UnprovableState, UnknownName, IllFormed, Resource };

  KernelError(Kind kind, Rule rule, Span span, std::string msg)
      : Error(std::move(msg)), kind(kind), rule(rule), span(span) {}

  Kind kind;
  Rule rule;
  Span span;
};

std::string kind_name(KernelError::Kind k);

/// Conclusion and extracted realizer of a checked derivation.
struct Checked {
  Triple triple;
  StTerm realizer;
};

/// Name of the realizer variable standing for hypothesis `label`.
Ident realizer_var(const Ident& label);
/// ⦃Γ⦄: each hypothesis u:A as realizer_var(u) : real_type(A).
TypingCtx real_context(const Context& ctx);

/// Checks `d` under `ctx` and returns its conclusion triple. Throws KernelError.
Triple check(const Derivation& d, const Theory& th, const Context& ctx = {});
/// Checks and extracts in one pass.
Checked check_and_extract(const Derivation& d, const Theory& th, const Context& ctx = {});

// ---------------------------------------------------------------------------
// Predicate logic and arithmetic embedded at a fixed state formula
// ---------------------------------------------------------------------------

/// A_α: every triple annotation of `a` replaced by α.
MainFormula embed_formula(const MainFormula& a, const StateFormula& alpha);
/// Γ_α
Context embed_context(const Context& ctx, const StateFormula& alpha);
/// True when every triple in `a` is ⟨⊤⟩…⟨⊤⟩.
bool is_pl_formula(const MainFormula& a);

/// Checks a PL/HA derivation (formulas with ⟨⊤⟩…⟨⊤⟩ triples, no Hoare rules)
/// and returns the proved formula.
MainFormula check_pl(const Derivation& d, const Theory& th, const Context& ctx = {});
/// Translates a PL/HA derivation of Γ ⊢ A into one of Γ_α ⊢_S ⟨α⟩A_α⟨α⟩.
DerivPtr embed_pl(const DerivPtr& d, const StateFormula& alpha);

// ---------------------------------------------------------------------------
// Derived rules
// ---------------------------------------------------------------------------

/// From ⟨α⟩⊤⟨β⟩ and ⟨β⟩⊤⟨γ⟩ derive ⟨α⟩⊤⟨γ⟩.
DerivPtr derive_comp(DerivPtr d1, DerivPtr d2);

/// Given an HA proof of s = t and body : Γ ⊢_S ⟨α(s)⟩A(s)⟨β(s)⟩, derive
/// Γ ⊢_S ⟨α(t)⟩A(t)⟨β(t)⟩. The template (x, A(x), α(x), β(x)) fixes which
/// occurrences are generalized; it must reproduce the body's conclusion.
DerivPtr derive_ext(const DerivPtr& eq_pl, const Ident& x, const MainFormula& a, const StateFormula& alpha,
                    const StateFormula& beta, const DerivPtr& body, const Theory& th, const Context& ctx = {});

}  // namespace hx
