#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hx/parse.hpp"

namespace hx {

/// Outcome of kernel-checking one named proof.
struct ProofOutcome {
  bool ok = false;
  /// One-line diagnostic when !ok.
  std::string diagnostic;
  std::optional<Triple> triple;
  std::optional<StTerm> realizer;
};

ProofOutcome check_named(const Document& doc, const NamedProof& p);

/// Conclusion as printed by `check`.
std::string conclusion_string(const NamedProof& p, const Triple& t, Notation n);

struct DisplayOptions {
  bool cleanup = false;
  bool simplify = false;
};
/// The realizer after the requested display rewrites.
StTerm display_term(const StTerm& t, const Document& doc, const NamedProof& p, const DisplayOptions& o);

/// `X`, `X.slp`, or `X.slp` under the shipped corpus directory.
std::filesystem::path resolve_target(const std::string& target);
/// The proof named by --proof, else the one named after the file, else the only one.
const NamedProof& select_proof(const Document& doc, const std::filesystem::path& file,
                               const std::optional<std::string>& name);

/// HOARE_EXTRACT_SEED or 0.
std::uint64_t default_seed();

/// Entry point of the hoare-extract tool. Exit codes: 0 success, 1 check or
/// verification failure, 2 usage or parse error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hx
