#pragma once

// Truth-table evaluation of compiled propositional formulas.
//
// A Program is a postfix instruction stream over atom indices. The kernels
// search the 2^n assignments for one that makes the program false. Three
// implementations exist: a scalar reference, a 64-lane bitsliced version and
// an AVX2 version (256 lanes). All return the smallest falsifying assignment,
// so their results are directly comparable.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hx::tt {

enum class OpCode : std::uint8_t { Atom, True, False, Not, And, Or, Imp };

struct Op {
  OpCode code;
  std::uint32_t atom = 0;
};

struct Program {
  std::vector<Op> ops;
  int num_atoms = 0;
  int max_stack = 0;

  /// Checks stack discipline and atom bounds, fills max_stack.
  void finalize();
};

enum class Backend { Scalar, Bitsliced, Avx2 };

std::string backend_name(Backend b);
bool avx2_available();
/// Fastest backend usable on this machine.
Backend best_backend();

/// Bit i of the assignment is the value of atom i.
bool eval_scalar(const Program& p, std::uint64_t assignment);

std::optional<std::uint64_t> find_falsifying_scalar(const Program& p);
std::optional<std::uint64_t> find_falsifying_bitsliced(const Program& p);
std::optional<std::uint64_t> find_falsifying_avx2(const Program& p);

std::optional<std::uint64_t> find_falsifying(const Program& p, Backend b);
inline std::optional<std::uint64_t> find_falsifying(const Program& p) {
  return find_falsifying(p, best_backend());
}

}  // namespace hx::tt
