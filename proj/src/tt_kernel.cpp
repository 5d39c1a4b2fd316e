#include "hx/tt_kernel.hpp"

#include <stdexcept>

namespace hx::tt {

void Program::finalize() {
  int depth = 0;
  max_stack = 0;
  for (const Op& op : ops) {
    switch (op.code) {
      case OpCode::Atom:
        if (op.atom >= static_cast<std::uint32_t>(num_atoms)) throw std::logic_error("tt: atom out of range");
        [[fallthrough]];
      case OpCode::True:
      case OpCode::False:
        ++depth;
        break;
      case OpCode::Not:
        if (depth < 1) throw std::logic_error("tt: stack underflow");
        break;
      default:
        if (depth < 2) throw std::logic_error("tt: stack underflow");
        --depth;
    }
    if (depth > max_stack) max_stack = depth;
  }
  if (depth != 1) throw std::logic_error("tt: program must leave exactly one value");
  if (num_atoms > 40) throw std::logic_error("tt: too many atoms");
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Bitsliced:
      return "bitsliced64";
    case Backend::Avx2:
      return "avx2";
  }
  return "?";
}

bool eval_scalar(const Program& p, std::uint64_t assignment) {
  std::vector<bool> st;
  st.reserve(p.max_stack);
  for (const Op& op : p.ops) {
    switch (op.code) {
      case OpCode::Atom:
        st.push_back((assignment >> op.atom) & 1u);
        break;
      case OpCode::True:
        st.push_back(true);
        break;
      case OpCode::False:
        st.push_back(false);
        break;
      case OpCode::Not:
        st.back() = !st.back();
        break;
      default: {
        bool b = st.back();
        st.pop_back();
        bool a = st.back();
        st.back() = op.code == OpCode::And ? (a && b) : op.code == OpCode::Or ? (a || b) : (!a || b);
      }
    }
  }
  return st.back();
}

std::optional<std::uint64_t> find_falsifying_scalar(const Program& p) {
  const std::uint64_t total = std::uint64_t{1} << p.num_atoms;
  for (std::uint64_t a = 0; a < total; ++a)
    if (!eval_scalar(p, a)) return a;
  return std::nullopt;
}

namespace {

// Lane patterns for the low six atoms inside one 64-bit word.
constexpr std::uint64_t kLanePattern[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

}  // namespace

std::optional<std::uint64_t> find_falsifying_bitsliced(const Program& p) {
  const int n = p.num_atoms;
  const int low = n < 6 ? n : 6;
  const std::uint64_t lanes = std::uint64_t{1} << low;
  const std::uint64_t lane_mask = lanes == 64 ? ~0ull : ((1ull << lanes) - 1);
  const std::uint64_t blocks = n > 6 ? (std::uint64_t{1} << (n - 6)) : 1;

  std::vector<std::uint64_t> st(p.max_stack + 1);
  for (std::uint64_t blk = 0; blk < blocks; ++blk) {
    std::size_t sp = 0;
    for (const Op& op : p.ops) {
      switch (op.code) {
        case OpCode::Atom:
          if (op.atom < 6)
            st[sp++] = kLanePattern[op.atom];
          else
            st[sp++] = ((blk >> (op.atom - 6)) & 1u) ? ~0ull : 0ull;
          break;
        case OpCode::True:
          st[sp++] = ~0ull;
          break;
        case OpCode::False:
          st[sp++] = 0;
          break;
        case OpCode::Not:
          st[sp - 1] = ~st[sp - 1];
          break;
        case OpCode::And:
          --sp;
          st[sp - 1] &= st[sp];
          break;
        case OpCode::Or:
          --sp;
          st[sp - 1] |= st[sp];
          break;
        case OpCode::Imp:
          --sp;
          st[sp - 1] = ~st[sp - 1] | st[sp];
          break;
      }
    }
    std::uint64_t falsified = ~st[0] & lane_mask;
    if (falsified) {
      int lane = __builtin_ctzll(falsified);
      return (blk << 6) | static_cast<std::uint64_t>(lane);
    }
  }
  return std::nullopt;
}

#if !defined(HX_HAVE_AVX2_KERNEL)
std::optional<std::uint64_t> find_falsifying_avx2(const Program& p) { return find_falsifying_bitsliced(p); }
bool avx2_available() { return false; }
#endif

Backend best_backend() { return avx2_available() ? Backend::Avx2 : Backend::Bitsliced; }

std::optional<std::uint64_t> find_falsifying(const Program& p, Backend b) {
  switch (b) {
    case Backend::Scalar:
      return find_falsifying_scalar(p);
    case Backend::Bitsliced:
      return find_falsifying_bitsliced(p);
    case Backend::Avx2:
      if (!avx2_available()) throw std::runtime_error("AVX2 kernel requested but not supported by this CPU");
      return find_falsifying_avx2(p);
  }
  return std::nullopt;
}

}  // namespace hx::tt
