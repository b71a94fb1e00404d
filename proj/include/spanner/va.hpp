#pragma once

// Variable-set automata: the compiled form of a spanner. Letter transitions
// carry byte classes, variable transitions carry a single marker. States are
// dense ids; an automaton with zero states denotes the empty spanner.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "spanner/core.hpp"

namespace spanner {

struct LetterTransition {
  StateId from;
  ByteClass cls;
  StateId to;
};

struct VarTransition {
  StateId from;
  MarkerId marker;
  StateId to;
  auto operator<=>(const VarTransition&) const = default;
};

struct VarAutomaton {
  uint32_t num_states = 0;
  StateId initial = 0;
  std::vector<uint8_t> finals;              // size num_states
  std::vector<LetterTransition> letters;    // sorted by source
  std::vector<VarTransition> variables;     // sorted by (source, marker, target)
  uint32_t num_vars = 0;
  std::vector<std::string> var_names;

  // CSR offsets into `letters` / `variables` by source state, plus reverse
  // indices by target state (used by backward sweeps).
  std::vector<uint32_t> letter_begin;
  std::vector<uint32_t> var_begin;
  std::vector<uint32_t> letter_rev, letter_rev_begin;
  std::vector<uint32_t> var_rev, var_rev_begin;

  bool empty() const { return num_states == 0; }
  bool is_final(StateId q) const { return finals[q]; }

  size_t size() const { return num_states + letters.size() + variables.size(); }

  void finish() {
    finals.resize(num_states, 0);
    std::stable_sort(letters.begin(), letters.end(),
                     [](const LetterTransition& a, const LetterTransition& b) {
                       return a.from < b.from;
                     });
    std::sort(variables.begin(), variables.end());
    variables.erase(std::unique(variables.begin(), variables.end()), variables.end());
    letter_begin.assign(num_states + 1, 0);
    var_begin.assign(num_states + 1, 0);
    for (const auto& t : letters) letter_begin[t.from + 1]++;
    for (const auto& t : variables) var_begin[t.from + 1]++;
    for (uint32_t q = 0; q < num_states; ++q) {
      letter_begin[q + 1] += letter_begin[q];
      var_begin[q + 1] += var_begin[q];
    }
    build_reverse(letters.size(), [&](size_t i) { return letters[i].to; }, letter_rev,
                  letter_rev_begin);
    build_reverse(variables.size(), [&](size_t i) { return variables[i].to; }, var_rev,
                  var_rev_begin);
  }

  template <typename TargetOf>
  void build_reverse(size_t count, TargetOf&& target_of, std::vector<uint32_t>& rev,
                     std::vector<uint32_t>& rev_begin) const {
    rev_begin.assign(num_states + 1, 0);
    for (size_t i = 0; i < count; ++i) rev_begin[target_of(i) + 1]++;
    for (uint32_t q = 0; q < num_states; ++q) rev_begin[q + 1] += rev_begin[q];
    rev.resize(count);
    std::vector<uint32_t> cursor(rev_begin.begin(), rev_begin.end() - 1);
    for (size_t i = 0; i < count; ++i) rev[cursor[target_of(i)]++] = static_cast<uint32_t>(i);
  }

  template <typename F>
  void for_letters_from(StateId q, F&& f) const {
    for (uint32_t i = letter_begin[q]; i < letter_begin[q + 1]; ++i) f(letters[i]);
  }
  template <typename F>
  void for_vars_from(StateId q, F&& f) const {
    for (uint32_t i = var_begin[q]; i < var_begin[q + 1]; ++i) f(variables[i]);
  }
};

// Keeps only states that are accessible from the initial state and
// co-accessible to a final state; returns the empty automaton if the
// spanner is empty.
inline VarAutomaton trim_va(const VarAutomaton& va) {
  if (va.empty()) return va;
  uint32_t n = va.num_states;
  std::vector<uint8_t> fwd(n, 0), bwd(n, 0);
  std::deque<StateId> queue;
  fwd[va.initial] = 1;
  queue.push_back(va.initial);
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    auto visit = [&](StateId t) {
      if (!fwd[t]) {
        fwd[t] = 1;
        queue.push_back(t);
      }
    };
    va.for_letters_from(q, [&](const LetterTransition& t) {
      if (t.cls.any()) visit(t.to);
    });
    va.for_vars_from(q, [&](const VarTransition& t) { visit(t.to); });
  }
  // Reverse adjacency for the co-accessibility sweep.
  std::vector<std::vector<StateId>> preds(n);
  for (const auto& t : va.letters)
    if (t.cls.any()) preds[t.to].push_back(t.from);
  for (const auto& t : va.variables) preds[t.to].push_back(t.from);
  for (uint32_t q = 0; q < n; ++q) {
    if (va.finals[q] && !bwd[q]) {
      bwd[q] = 1;
      queue.push_back(q);
    }
  }
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    for (StateId p : preds[q]) {
      if (!bwd[p]) {
        bwd[p] = 1;
        queue.push_back(p);
      }
    }
  }
  std::vector<StateId> remap(n, UINT32_MAX);
  VarAutomaton out;
  out.num_vars = va.num_vars;
  out.var_names = va.var_names;
  for (uint32_t q = 0; q < n; ++q) {
    if (fwd[q] && bwd[q]) remap[q] = out.num_states++;
  }
  if (remap[va.initial] == UINT32_MAX) {
    VarAutomaton empty;
    empty.num_vars = va.num_vars;
    empty.var_names = va.var_names;
    return empty;
  }
  out.initial = remap[va.initial];
  out.finals.resize(out.num_states, 0);
  for (uint32_t q = 0; q < n; ++q) {
    if (remap[q] == UINT32_MAX) continue;
    out.finals[remap[q]] = va.finals[q];
  }
  for (const auto& t : va.letters) {
    if (t.cls.any() && remap[t.from] != UINT32_MAX && remap[t.to] != UINT32_MAX)
      out.letters.push_back({remap[t.from], t.cls, remap[t.to]});
  }
  for (const auto& t : va.variables) {
    if (remap[t.from] != UINT32_MAX && remap[t.to] != UINT32_MAX)
      out.variables.push_back({remap[t.from], t.marker, remap[t.to]});
  }
  out.finish();
  return out;
}

// One step of a witness run demonstrating non-sequentiality.
struct WitnessStep {
  bool is_marker;
  MarkerId marker;  // when is_marker
  uint8_t byte;     // when !is_marker (a representative byte of the class)
  StateId from, to;
};

struct SequentialCheck {
  bool ok = true;
  std::vector<WitnessStep> witness;  // ends with the offending marker use, or
                                     // reaches a final state with an open variable
  std::string reason;
};

namespace detail {

enum VarStatus : uint8_t { kUnseen = 0, kOpen = 1, kClosed = 2 };

inline uint64_t pack_status(const std::vector<uint8_t>& st) {
  uint64_t v = 0;
  for (size_t i = 0; i < st.size(); ++i) v |= uint64_t(st[i]) << (2 * i);
  return v;
}

}  // namespace detail

// Reachability over (state, per-variable status) configurations, looking for
// an accepting path that repeats a marker, closes before opening, or reaches
// a final state with a variable still open. Assumes `va` is trimmed, so any
// state can complete to acceptance.
inline SequentialCheck check_sequential(const VarAutomaton& va) {
  SequentialCheck res;
  if (va.empty()) return res;
  SPANNER_ASSERT(va.num_vars <= 31, "too many variables for sequentiality check");
  struct Config {
    StateId q;
    uint64_t packed;
  };
  std::unordered_map<uint64_t, uint32_t> seen;  // packed config -> parent index
  std::vector<std::pair<uint64_t, int64_t>> order;  // (config key, parent order idx)
  std::vector<WitnessStep> step_into;               // step taken to reach order[i]
  auto key_of = [&](StateId q, uint64_t packed) { return packed * va.num_states + q; };

  std::deque<std::pair<Config, int64_t>> queue;
  queue.push_back({{va.initial, 0}, -1});
  seen.emplace(key_of(va.initial, 0), 0);
  order.emplace_back(key_of(va.initial, 0), -1);
  step_into.push_back({});

  auto build_witness = [&](int64_t idx, std::optional<WitnessStep> last) {
    std::vector<WitnessStep> w;
    if (last) w.push_back(*last);
    while (idx > 0) {
      w.push_back(step_into[idx]);
      idx = order[idx].second;
    }
    std::reverse(w.begin(), w.end());
    return w;
  };

  while (!queue.empty()) {
    auto [cfg, my_idx] = queue.front();
    queue.pop_front();
    std::vector<uint8_t> st(va.num_vars);
    for (uint32_t v = 0; v < va.num_vars; ++v)
      st[v] = static_cast<uint8_t>((cfg.packed >> (2 * v)) & 3);

    auto enqueue = [&](StateId q, uint64_t packed, WitnessStep step, int64_t parent) {
      uint64_t k = key_of(q, packed);
      if (seen.emplace(k, 0).second) {
        int64_t idx = static_cast<int64_t>(order.size());
        order.emplace_back(k, parent);
        step_into.push_back(step);
        queue.push_back({{q, packed}, idx});
      }
    };

    va.for_vars_from(cfg.q, [&](const VarTransition& t) {
      if (!res.ok) return;
      VarId v = marker_var(t.marker);
      uint8_t s = st[v];
      bool valid = is_close(t.marker) ? (s == detail::kOpen) : (s == detail::kUnseen);
      WitnessStep step{true, t.marker, 0, t.from, t.to};
      if (!valid) {
        // The target completes to acceptance because the VA is trimmed.
        res.ok = false;
        res.reason = is_close(t.marker) && s != detail::kOpen
                         ? "close marker without matching open"
                         : "marker read twice";
        res.witness = build_witness(my_idx, step);
        return;
      }
      uint64_t packed = cfg.packed;
      packed &= ~(uint64_t(3) << (2 * v));
      packed |= uint64_t(is_close(t.marker) ? detail::kClosed : detail::kOpen) << (2 * v);
      enqueue(t.to, packed, step, my_idx);
    });
    if (!res.ok) return res;

    if (va.is_final(cfg.q)) {
      for (uint32_t v = 0; v < va.num_vars; ++v) {
        if (st[v] == detail::kOpen) {
          res.ok = false;
          res.reason = "accepting run ends with variable " +
                       (v < va.var_names.size() ? va.var_names[v] : std::to_string(v)) +
                       " open";
          res.witness = build_witness(my_idx, std::nullopt);
          return res;
        }
      }
    }

    va.for_letters_from(cfg.q, [&](const LetterTransition& t) {
      if (!t.cls.any()) return;
      uint8_t rep = 0;
      bool have = false;
      t.cls.for_each([&](uint8_t b) {
        if (!have) {
          rep = b;
          have = true;
        }
      });
      enqueue(t.to, cfg.packed, WitnessStep{false, 0, rep, t.from, t.to}, my_idx);
    });
  }
  return res;
}

// Product of `va` with per-variable status vectors. Invalid marker uses are
// dropped, final states require every variable unseen-or-closed. The result
// is sequential and captures exactly the mappings of the valid runs of `va`.
inline VarAutomaton make_sequential(const VarAutomaton& va, size_t max_states = 1u << 20) {
  if (va.empty()) return va;
  SPANNER_ASSERT(va.num_vars <= 31, "too many variables for sequentialization");
  uint64_t required = 1;
  for (uint32_t v = 0; v < va.num_vars; ++v) required *= 3;
  required *= va.num_states;
  if (required > max_states) {
    throw BudgetError("make_sequential would need up to " + std::to_string(required) +
                      " states, budget is " + std::to_string(max_states));
  }

  auto key_of = [&](StateId q, uint64_t packed) { return packed * va.num_states + q; };
  std::unordered_map<uint64_t, StateId> ids;
  std::vector<std::pair<StateId, uint64_t>> configs;  // by new id
  std::deque<uint32_t> queue;

  VarAutomaton out;
  out.num_vars = va.num_vars;
  out.var_names = va.var_names;

  auto intern = [&](StateId q, uint64_t packed) -> StateId {
    uint64_t k = key_of(q, packed);
    auto [it, inserted] = ids.emplace(k, static_cast<StateId>(configs.size()));
    if (inserted) {
      configs.emplace_back(q, packed);
      queue.push_back(it->second);
    }
    return it->second;
  };
  intern(va.initial, 0);
  out.initial = 0;

  while (!queue.empty()) {
    uint32_t id = queue.front();
    queue.pop_front();
    auto [q, packed] = configs[id];
    va.for_vars_from(q, [&](const VarTransition& t) {
      VarId v = marker_var(t.marker);
      uint8_t s = static_cast<uint8_t>((packed >> (2 * v)) & 3);
      bool valid = is_close(t.marker) ? (s == detail::kOpen) : (s == detail::kUnseen);
      if (!valid) return;
      uint64_t np = packed;
      np &= ~(uint64_t(3) << (2 * v));
      np |= uint64_t(is_close(t.marker) ? detail::kClosed : detail::kOpen) << (2 * v);
      StateId to = intern(t.to, np);
      out.variables.push_back({id, t.marker, to});
    });
    va.for_letters_from(q, [&](const LetterTransition& t) {
      if (!t.cls.any()) return;
      StateId to = intern(t.to, packed);
      out.letters.push_back({id, t.cls, to});
    });
  }

  out.num_states = static_cast<uint32_t>(configs.size());
  out.finals.resize(out.num_states, 0);
  for (uint32_t id = 0; id < out.num_states; ++id) {
    auto [q, packed] = configs[id];
    if (!va.is_final(q)) continue;
    bool all_ok = true;
    for (uint32_t v = 0; v < va.num_vars; ++v) {
      if (((packed >> (2 * v)) & 3) == detail::kOpen) all_ok = false;
    }
    out.finals[id] = all_ok;
  }
  out.finish();
  return trim_va(out);
}

}  // namespace spanner
