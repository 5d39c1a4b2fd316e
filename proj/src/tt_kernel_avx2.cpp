// AVX2 variant of the truth-table search. Compiled with -mavx2; only called
// after a runtime cpuid check.

#include <immintrin.h>

#include "hx/tt_kernel.hpp"

namespace hx::tt {

bool avx2_available() {
  static const bool ok = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return ok;
}

namespace {

constexpr std::uint64_t kLanePattern[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

// Each 256-bit register holds 4 words; word w covers assignments
// blk*256 + w*64 + lane, so atoms 6 and 7 are the word index bits.
__m256i atom_vector(std::uint32_t atom, std::uint64_t blk) {
  if (atom < 6) return _mm256_set1_epi64x(static_cast<long long>(kLanePattern[atom]));
  if (atom == 6) return _mm256_set_epi64x(-1, 0, -1, 0);
  if (atom == 7) return _mm256_set_epi64x(-1, -1, 0, 0);
  return ((blk >> (atom - 8)) & 1u) ? _mm256_set1_epi64x(-1) : _mm256_setzero_si256();
}

}  // namespace

std::optional<std::uint64_t> find_falsifying_avx2(const Program& p) {
  const int n = p.num_atoms;
  const std::uint64_t total = std::uint64_t{1} << n;
  const std::uint64_t blocks = n > 8 ? (std::uint64_t{1} << (n - 8)) : 1;
  const __m256i ones = _mm256_set1_epi64x(-1);

  // Wrapped so the vector keeps the vector type's alignment attribute.
  struct Slot {
    __m256i v;
  };
  std::vector<Slot> slots(p.max_stack + 1);
  auto st = [&](std::size_t i) -> __m256i& { return slots[i].v; };
  alignas(32) std::uint64_t words[4];
  for (std::uint64_t blk = 0; blk < blocks; ++blk) {
    std::size_t sp = 0;
    for (const Op& op : p.ops) {
      switch (op.code) {
        case OpCode::Atom:
          st(sp++) = atom_vector(op.atom, blk);
          break;
        case OpCode::True:
          st(sp++) = ones;
          break;
        case OpCode::False:
          st(sp++) = _mm256_setzero_si256();
          break;
        case OpCode::Not:
          st(sp - 1) = _mm256_xor_si256(st(sp - 1), ones);
          break;
        case OpCode::And:
          --sp;
          st(sp - 1) = _mm256_and_si256(st(sp - 1), st(sp));
          break;
        case OpCode::Or:
          --sp;
          st(sp - 1) = _mm256_or_si256(st(sp - 1), st(sp));
          break;
        case OpCode::Imp:
          --sp;
          st(sp - 1) = _mm256_or_si256(_mm256_xor_si256(st(sp - 1), ones), st(sp));
          break;
      }
    }
    if (_mm256_testc_si256(st(0), ones)) continue;  // all lanes true
    _mm256_store_si256(reinterpret_cast<__m256i*>(words), st(0));
    for (int w = 0; w < 4; ++w) {
      std::uint64_t falsified = ~words[w];
      while (falsified) {
        int lane = __builtin_ctzll(falsified);
        std::uint64_t idx = (blk << 8) | (static_cast<std::uint64_t>(w) << 6) | static_cast<std::uint64_t>(lane);
        if (idx >= total) break;
        return idx;
      }
    }
  }
  return std::nullopt;
}

}  // namespace hx::tt
