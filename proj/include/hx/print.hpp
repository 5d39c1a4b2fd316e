#pragma once

#include <string>

#include "hx/syntax.hpp"

namespace hx {

enum class Notation { Ascii, Unicode };

std::string to_string(const Term& t, Notation n = Notation::Ascii);
std::string to_string(const StateFormula& a, Notation n = Notation::Ascii);
std::string to_string(const MainFormula& a, Notation n = Notation::Ascii);
std::string to_string(const Triple& t, Notation n = Notation::Ascii);
/// "u: A, v: B |- {pre} body {post}"
std::string to_string(const Context& ctx, const Triple& t, Notation n = Notation::Ascii);
/// "hyp1, hyp2 |- goal" for state sequents.
std::string state_sequent_string(const std::vector<StateFormula>& hyps, const StateFormula& goal,
                                 Notation n = Notation::Ascii);

}  // namespace hx
