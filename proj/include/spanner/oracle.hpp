#pragma once

// Ground-truth enumeration by exhaustive run exploration. Exponential in the
// worst case and guarded by a step budget; used for cross-checking the
// engines on small instances, never on real workloads.

#include <cstdint>
#include <set>
#include <string_view>
#include <vector>

#include "spanner/core.hpp"
#include "spanner/va.hpp"

namespace spanner {

// All mappings of valid runs of `va` on `doc`, found by depth-first search
// over (state, position, accumulated mapping) configurations. Invalid marker
// uses are pruned, which also bounds marker chains, so the search terminates
// on any VA. Distinct runs that agree on state, position, and the markers
// read so far contribute the same continuations, so such configurations are
// explored once.
inline std::set<Mapping> oracle_enumerate(const VarAutomaton& va, std::string_view doc,
                                          uint64_t budget = 10'000'000) {
  std::set<Mapping> out;
  if (va.empty()) return out;
  uint64_t steps = 0;
  std::vector<uint8_t> status(va.num_vars, detail::kUnseen);
  Mapping current;
  std::set<std::pair<uint64_t, Mapping>> visited;

  auto dfs = [&](auto&& self, StateId q, size_t pos) -> void {
    if (++steps > budget) throw BudgetError("oracle budget exceeded");
    Mapping key = current;
    canonicalize(key);
    if (!visited.emplace(uint64_t(pos) * va.num_states + q, std::move(key)).second) return;
    if (pos == doc.size() && va.is_final(q)) {
      bool open = false;
      for (uint8_t s : status)
        if (s == detail::kOpen) open = true;
      if (!open) {
        Mapping m = current;
        canonicalize(m);
        out.insert(std::move(m));
      }
    }
    va.for_vars_from(q, [&](const VarTransition& t) {
      VarId v = marker_var(t.marker);
      uint8_t s = status[v];
      bool valid = is_close(t.marker) ? (s == detail::kOpen) : (s == detail::kUnseen);
      if (!valid) return;
      status[v] = is_close(t.marker) ? detail::kClosed : detail::kOpen;
      current.push_back({t.marker, static_cast<uint32_t>(pos)});
      self(self, t.to, pos);
      current.pop_back();
      status[v] = s;
    });
    if (pos < doc.size()) {
      uint8_t b = static_cast<uint8_t>(doc[pos]);
      va.for_letters_from(q, [&](const LetterTransition& t) {
        if (t.cls.test(b)) self(self, t.to, pos + 1);
      });
    }
  };
  dfs(dfs, va.initial, 0);
  return out;
}

}  // namespace spanner
