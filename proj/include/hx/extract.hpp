#pragma once

#include "hx/derivation.hpp"
#include "hx/kernel.hpp"
#include "hx/st.hpp"
#include "hx/theory.hpp"

namespace hx {

/// Extracted realizer of a derivation. Hypothesis u:A becomes a free variable
/// realizer_var(u) : real_type(A); eigenvariables are λ-bound.
StTerm extract(const Derivation& d, const Theory& th, const Context& ctx = {});

/// Replaces every free variable outside `ctx` by the canonical constant.
/// Throws Error if such a variable is used at a type other than D.
StTerm free_var_ground(const StTerm& t, const Theory& th, const TypingCtx& ctx = {});

/// Typing context for `t`: ⦃Γ⦄ plus D for every other free variable.
TypingCtx extraction_context(const StTerm& t, const Context& ctx);

/// Contracts the currying wrappers introduced by existential elimination
/// when the argument is a state-independent pair, and drops skip components
/// of projected pairs. Display and comparison only.
StTerm cleanup_admin(const StTerm& t);

}  // namespace hx
