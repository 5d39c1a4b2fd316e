#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hx {

struct SelftestOptions {
  std::filesystem::path corpus;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0;
  std::string detail;
};

/// Runs every acceptance criterion in order. When `log` is set, one line per
/// criterion is written as soon as it finishes.
std::vector<CriterionResult> run_acceptance(const SelftestOptions& o, std::ostream* log = nullptr);

/// "PASS  3 name (0.12 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace hx
