#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hx/derivation.hpp"
#include "hx/semantics.hpp"
#include "hx/st.hpp"
#include "hx/syntax.hpp"
#include "hx/theory.hpp"

namespace hx {

class ParseError : public Error {
 public:
  ParseError(std::string file, Span span, const std::string& msg);

  std::string file;
  Span span;
  /// The message without the location prefix.
  std::string bare;
};

/// A derivation named in a proof file. PL proofs state a bare formula and are
/// checked with check_pl; the others state a triple.
struct NamedProof {
  Ident name;
  bool pl = false;
  /// Written as (embed {α} d) of a PL derivation.
  bool embedded = false;
  Context ctx;
  std::optional<Triple> goal;
  std::optional<MainFormula> pl_goal;
  DerivPtr deriv;
  std::string file;
  Span span;
};

/// A theory together with the proofs declared alongside it.
struct Document {
  Theory theory = Theory::predicate_logic();
  std::shared_ptr<const StateModel> model;
  std::vector<NamedProof> proofs;
  /// Every file read, in load order.
  std::vector<std::string> files;

  const NamedProof* find(const Ident& name) const;
  /// The attached model or the free model.
  const StateModel& semantics() const;
};

/// Reads `path` and everything it includes.
Document load_document(const std::filesystem::path& path);
/// Parses `text` on top of `base`; `file` names the source in diagnostics and
/// `dir` resolves relative includes.
Document parse_document(std::string_view text, const std::string& file, const std::filesystem::path& dir,
                        Document base = {});

// Single-phrase parsers against a loaded theory. The whole input must be consumed.
Term parse_term(std::string_view text, const Theory& th);
StateFormula parse_state_formula(std::string_view text, const Theory& th);
MainFormula parse_main_formula(std::string_view text, const Theory& th);
Triple parse_triple(std::string_view text, const Theory& th);
/// "h1, h2 |- g"
StateSequent parse_state_sequent(std::string_view text, const Theory& th);
StType parse_type(std::string_view text);
StTerm parse_st(std::string_view text, const Theory& th);
/// A derivation in prefix syntax; `doc` resolves (use NAME) references.
DerivPtr parse_derivation(std::string_view text, const Theory& th, const Document* doc = nullptr);

/// Prefix syntax accepted by parse_derivation.
std::string print_derivation(const Derivation& d);
/// Declarations accepted by parse_document.
std::string print_theory(const Theory& th);
/// Theory declarations followed by every proof.
std::string print_document(const Document& doc);
/// Term text accepted by parse_st (lambda parameters annotated).
std::string print_st(const StTerm& t);

}  // namespace hx
