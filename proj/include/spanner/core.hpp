#pragma once

// Shared primitives: variable markers, byte classes, mappings, error types.

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace spanner {

using StateId = uint32_t;
using VarId = uint32_t;
using MarkerId = uint32_t;

// Markers are densely numbered: open(v) = 2v, close(v) = 2v+1. This is also
// the canonical label order used wherever a fixed marker order is required.
constexpr MarkerId open_marker(VarId v) { return 2 * v; }
constexpr MarkerId close_marker(VarId v) { return 2 * v + 1; }
constexpr bool is_close(MarkerId m) { return (m & 1u) != 0; }
constexpr VarId marker_var(MarkerId m) { return m >> 1; }

// The flashlight search keeps marker sets in 64-bit masks, with one bit
// reserved for the fresh-source label of the extendability check. This caps
// the number of capture variables a single spanner may use.
constexpr uint32_t kMaxVariables = 31;

inline std::string marker_name(MarkerId m, const std::vector<std::string>& var_names) {
  VarId v = marker_var(m);
  std::string n = v < var_names.size() ? var_names[v] : "v" + std::to_string(v);
  return (is_close(m) ? "close:" : "open:") + n;
}

struct ParseError : std::runtime_error {
  size_t offset;
  ParseError(const std::string& msg, size_t off)
      : std::runtime_error(msg + " (byte " + std::to_string(off) + ")"), offset(off) {}
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define SPANNER_ASSERT(cond, msg) \
  do {                            \
    if (!(cond)) throw std::logic_error(std::string("internal error: ") + (msg)); \
  } while (0)

// A set of bytes, used as the label of letter transitions. Class edges are a
// compression; they are expanded per byte when the document is consulted.
class ByteClass {
 public:
  bool test(uint8_t b) const { return (words_[b >> 6] >> (b & 63)) & 1u; }
  void set(uint8_t b) { words_[b >> 6] |= uint64_t{1} << (b & 63); }
  void set_range(uint8_t lo, uint8_t hi) {
    for (unsigned b = lo; b <= hi; ++b) set(static_cast<uint8_t>(b));
  }
  void negate() {
    for (auto& w : words_) w = ~w;
  }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  uint32_t count() const {
    uint32_t c = 0;
    for (auto w : words_) c += static_cast<uint32_t>(std::popcount(w));
    return c;
  }
  bool operator==(const ByteClass&) const = default;

  static ByteClass single(uint8_t b) {
    ByteClass c;
    c.set(b);
    return c;
  }
  static ByteClass all() {
    ByteClass c;
    c.negate();
    return c;
  }
  // "." in patterns: any byte except newline.
  static ByteClass dot() {
    ByteClass c = all();
    c.words_[0] &= ~(uint64_t{1} << '\n');
    return c;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (unsigned w = 0; w < 4; ++w) {
      uint64_t bits = words_[w];
      while (bits) {
        unsigned b = static_cast<unsigned>(std::countr_zero(bits));
        f(static_cast<uint8_t>(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }

 private:
  std::array<uint64_t, 4> words_{};
};

// One (marker, position) pair of an extraction result.
struct MarkerPos {
  MarkerId marker;
  uint32_t pos;
  auto operator<=>(const MarkerPos&) const = default;
};

// A mapping is a valid set of (marker, position) pairs, kept in canonical
// order: ascending position, opens before closes at equal positions, then
// marker id.
using Mapping = std::vector<MarkerPos>;

inline bool canonical_pair_less(const MarkerPos& a, const MarkerPos& b) {
  if (a.pos != b.pos) return a.pos < b.pos;
  bool ac = is_close(a.marker), bc = is_close(b.marker);
  if (ac != bc) return !ac;
  return a.marker < b.marker;
}

inline void canonicalize(Mapping& m) {
  std::sort(m.begin(), m.end(), canonical_pair_less);
}

// Validity per the run semantics: each marker at most once, an open at i has
// its close at i' >= i, and closes never appear without their open.
inline bool mapping_is_valid(const Mapping& m) {
  std::vector<std::pair<bool, uint32_t>> open_at;   // per var: (seen, pos)
  std::vector<std::pair<bool, uint32_t>> close_at;
  for (const auto& p : m) {
    VarId v = marker_var(p.marker);
    if (v >= open_at.size()) {
      open_at.resize(v + 1, {false, 0});
      close_at.resize(v + 1, {false, 0});
    }
    auto& slot = is_close(p.marker) ? close_at[v] : open_at[v];
    if (slot.first) return false;  // marker repeated
    slot = {true, p.pos};
  }
  for (size_t v = 0; v < open_at.size(); ++v) {
    if (open_at[v].first != close_at[v].first) return false;
    if (open_at[v].first && open_at[v].second > close_at[v].second) return false;
  }
  return true;
}

inline std::string mapping_to_string(const Mapping& m, const std::vector<std::string>& var_names) {
  std::string s = "{";
  for (size_t i = 0; i < m.size(); ++i) {
    if (i) s += ", ";
    s += "(" + marker_name(m[i].marker, var_names) + "," + std::to_string(m[i].pos) + ")";
  }
  return s + "}";
}

}  // namespace spanner
