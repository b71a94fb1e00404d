#pragma once

// Extended VAs read a whole set of markers in one ev-transition. States are
// partitioned into ev-states and letter-states so that every path alternates
// between ev-transitions and letter transitions; the initial state is an
// ev-state and final states are letter-states.
//
// Conversion from a (sequential, trimmed) VA collapses every maximal chain
// of variable transitions into one ev-transition and splits each state into
// an (ev, letter) pair. The number of chains can be exponential in the
// number of variables, which is why this direction is budgeted and used for
// cross-validation only.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spanner/core.hpp"
#include "spanner/va.hpp"

namespace spanner {

struct EvTransition {
  StateId from;
  uint32_t label;  // index into ExtendedVA::labels
  StateId to;
  auto operator<=>(const EvTransition&) const = default;
};

struct ExtendedVA {
  uint32_t num_states = 0;
  StateId initial = 0;
  std::vector<uint8_t> finals;
  std::vector<uint8_t> is_ev_state;
  std::vector<LetterTransition> letters;  // sorted by source
  std::vector<EvTransition> evs;          // sorted by (source, label rank, target)
  std::vector<std::vector<MarkerId>> labels;  // interned marker sets, each sorted
  std::vector<uint32_t> label_rank;           // canonical order; the empty set ranks last
  uint32_t num_vars = 0;
  std::vector<std::string> var_names;

  std::vector<uint32_t> letter_begin, ev_begin;
  std::vector<uint32_t> letter_rev, letter_rev_begin;
  std::vector<uint32_t> ev_rev, ev_rev_begin;

  bool empty() const { return num_states == 0; }
  bool is_final(StateId q) const { return finals[q]; }
  size_t size() const { return num_states + letters.size() + evs.size(); }

  void finish() {
    // Canonical label order: compare the sorted marker sequences
    // lexicographically, except that the empty set compares greatest.
    std::vector<uint32_t> by_order(labels.size());
    for (uint32_t i = 0; i < labels.size(); ++i) by_order[i] = i;
    auto label_less = [&](uint32_t a, uint32_t b) {
      if (labels[a].empty() != labels[b].empty()) return labels[b].empty();
      return labels[a] < labels[b];
    };
    std::sort(by_order.begin(), by_order.end(), label_less);
    label_rank.assign(labels.size(), 0);
    for (uint32_t r = 0; r < by_order.size(); ++r) label_rank[by_order[r]] = r;

    std::stable_sort(letters.begin(), letters.end(),
                     [](const LetterTransition& a, const LetterTransition& b) {
                       return a.from < b.from;
                     });
    std::sort(evs.begin(), evs.end(), [&](const EvTransition& a, const EvTransition& b) {
      if (a.from != b.from) return a.from < b.from;
      if (label_rank[a.label] != label_rank[b.label])
        return label_rank[a.label] < label_rank[b.label];
      return a.to < b.to;
    });
    evs.erase(std::unique(evs.begin(), evs.end()), evs.end());

    letter_begin.assign(num_states + 1, 0);
    ev_begin.assign(num_states + 1, 0);
    for (const auto& t : letters) letter_begin[t.from + 1]++;
    for (const auto& t : evs) ev_begin[t.from + 1]++;
    for (uint32_t q = 0; q < num_states; ++q) {
      letter_begin[q + 1] += letter_begin[q];
      ev_begin[q + 1] += ev_begin[q];
    }
    build_reverse(letters.size(), [&](size_t i) { return letters[i].to; }, letter_rev,
                  letter_rev_begin);
    build_reverse(evs.size(), [&](size_t i) { return evs[i].to; }, ev_rev, ev_rev_begin);
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
  // Visits ev-transitions in canonical label order (empty set last).
  template <typename F>
  void for_evs_from(StateId q, F&& f) const {
    for (uint32_t i = ev_begin[q]; i < ev_begin[q + 1]; ++i) f(evs[i]);
  }
};

inline ExtendedVA to_extended_va(const VarAutomaton& va, size_t max_transitions = 1u << 20) {
  ExtendedVA eva;
  eva.num_vars = va.num_vars;
  eva.var_names = va.var_names;
  if (va.empty()) return eva;

  // State layout: ev-copy of q is 2q, letter-copy is 2q+1.
  eva.num_states = 2 * va.num_states;
  eva.initial = 2 * va.initial;
  eva.finals.assign(eva.num_states, 0);
  eva.is_ev_state.assign(eva.num_states, 0);
  for (uint32_t q = 0; q < va.num_states; ++q) {
    eva.is_ev_state[2 * q] = 1;
    if (va.is_final(q)) eva.finals[2 * q + 1] = 1;
  }
  for (const auto& t : va.letters) {
    eva.letters.push_back({2 * t.from + 1, t.cls, 2 * t.to});
  }

  std::map<std::vector<MarkerId>, uint32_t> label_ids;
  auto intern = [&](const std::vector<MarkerId>& markers) {
    auto [it, inserted] = label_ids.emplace(markers, static_cast<uint32_t>(eva.labels.size()));
    if (inserted) eva.labels.push_back(markers);
    return it->second;
  };

  // Enumerate marker chains from each state by depth-first search. Chains
  // are acyclic because a trimmed sequential VA has no cycle of variable
  // transitions, and no chain repeats a marker for the same reason.
  size_t emitted = 0;
  std::vector<MarkerId> chain;
  std::vector<uint8_t> on_chain(2 * va.num_vars, 0);
  auto dfs = [&](auto&& self, StateId origin, StateId q) -> void {
    std::vector<MarkerId> sorted = chain;
    std::sort(sorted.begin(), sorted.end());
    uint32_t label = intern(sorted);
    eva.evs.push_back({2 * origin, label, 2 * q + 1});
    if (++emitted > max_transitions) {
      throw BudgetError("extended VA exceeds the transition budget of " +
                        std::to_string(max_transitions));
    }
    va.for_vars_from(q, [&](const VarTransition& t) {
      SPANNER_ASSERT(!on_chain[t.marker],
                     "marker repeated on a variable chain of a sequential VA");
      on_chain[t.marker] = 1;
      chain.push_back(t.marker);
      self(self, origin, t.to);
      chain.pop_back();
      on_chain[t.marker] = 0;
    });
  };
  for (uint32_t q = 0; q < va.num_states; ++q) {
    chain.clear();
    dfs(dfs, q, q);
  }
  eva.finish();
  return eva;
}

}  // namespace spanner
