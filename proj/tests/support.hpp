#pragma once

// Shared test machinery: independent oracles (AST semantics, exhaustive run
// and path enumeration, BFS reachability), random instance generators, and
// the hand-built e-mail fixtures.

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "spanner/spanner.hpp"

namespace spanner::testing {

// ---------------------------------------------------------------------------
// Brute-force semantics of a regex-formula AST: all (end, fragment) pairs of
// matches starting at `start`. Fragments that would read a marker twice are
// dropped, mirroring run validity. Fully independent of the Glushkov path.
// ---------------------------------------------------------------------------

using Frag = std::pair<size_t, Mapping>;

inline bool combine_frag(const Mapping& a, const Mapping& b, Mapping& out) {
  for (const auto& pa : a) {
    for (const auto& pb : b) {
      if (pa.marker == pb.marker) return false;
    }
  }
  out = a;
  out.insert(out.end(), b.begin(), b.end());
  canonicalize(out);
  return true;
}

inline std::set<Frag> ast_matches(const AstNode& n, std::string_view doc, size_t start) {
  std::set<Frag> out;
  switch (n.kind) {
    case NodeKind::Epsilon:
      out.insert({start, {}});
      break;
    case NodeKind::Literal:
      if (start < doc.size() && static_cast<uint8_t>(doc[start]) == n.literal)
        out.insert({start + 1, {}});
      break;
    case NodeKind::AnyChar:
      if (start < doc.size() && ByteClass::dot().test(static_cast<uint8_t>(doc[start])))
        out.insert({start + 1, {}});
      break;
    case NodeKind::CharClass:
      if (start < doc.size() && n.cls.test(static_cast<uint8_t>(doc[start])))
        out.insert({start + 1, {}});
      break;
    case NodeKind::Capture: {
      for (const auto& [end, frag] : ast_matches(n.children[0], doc, start)) {
        Mapping mine = {{open_marker(n.var), static_cast<uint32_t>(start)},
                        {close_marker(n.var), static_cast<uint32_t>(end)}};
        Mapping combined;
        if (combine_frag(frag, mine, combined)) out.insert({end, combined});
      }
      break;
    }
    case NodeKind::Union:
      for (const auto& c : n.children) {
        auto sub = ast_matches(c, doc, start);
        out.insert(sub.begin(), sub.end());
      }
      break;
    case NodeKind::Concat: {
      std::set<Frag> acc = {{start, {}}};
      for (const auto& c : n.children) {
        std::set<Frag> next;
        for (const auto& [mid, frag] : acc) {
          for (const auto& [end, frag2] : ast_matches(c, doc, mid)) {
            Mapping combined;
            if (combine_frag(frag, frag2, combined)) next.insert({end, combined});
          }
        }
        acc = std::move(next);
      }
      out = std::move(acc);
      break;
    }
    case NodeKind::Star:
    case NodeKind::Plus: {
      std::set<Frag> acc;
      if (n.kind == NodeKind::Star) {
        acc.insert({start, {}});
      } else {
        acc = ast_matches(n.children[0], doc, start);
      }
      // Fixpoint over repeated applications of the child.
      std::set<Frag> frontier = acc;
      while (!frontier.empty()) {
        std::set<Frag> fresh;
        for (const auto& [mid, frag] : frontier) {
          for (const auto& [end, frag2] : ast_matches(n.children[0], doc, mid)) {
            Mapping combined;
            if (!combine_frag(frag, frag2, combined)) continue;
            Frag cand{end, std::move(combined)};
            if (!acc.count(cand)) fresh.insert(cand);
          }
        }
        for (const auto& f : fresh) acc.insert(f);
        frontier = std::move(fresh);
      }
      out = std::move(acc);
      break;
    }
    case NodeKind::Optional: {
      out = ast_matches(n.children[0], doc, start);
      out.insert({start, {}});
      break;
    }
    case NodeKind::Counter: {
      std::set<Frag> exact = {{start, {}}};
      for (uint32_t i = 0; i < n.min; ++i) {
        std::set<Frag> next;
        for (const auto& [mid, frag] : exact) {
          for (const auto& [end, frag2] : ast_matches(n.children[0], doc, mid)) {
            Mapping combined;
            if (combine_frag(frag, frag2, combined)) next.insert({end, combined});
          }
        }
        exact = std::move(next);
      }
      out = exact;
      for (uint32_t i = n.min; i < n.max; ++i) {
        std::set<Frag> next;
        for (const auto& [mid, frag] : exact) {
          for (const auto& [end, frag2] : ast_matches(n.children[0], doc, mid)) {
            Mapping combined;
            if (combine_frag(frag, frag2, combined)) next.insert({end, combined});
          }
        }
        exact = std::move(next);
        out.insert(exact.begin(), exact.end());
      }
      break;
    }
  }
  return out;
}

// The mapping set of a formula on a document, by direct AST interpretation.
inline std::set<Mapping> ast_oracle(const RegexFormula& f, std::string_view doc) {
  std::set<Mapping> out;
  for (const auto& [end, frag] : ast_matches(f.root, doc, 0)) {
    if (end == doc.size() && mapping_is_valid(frag)) out.insert(frag);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive path enumeration over a mapping DAG: the label sets of all
// paths from `from` (default: the initial vertex) to the final vertex.
// ---------------------------------------------------------------------------

inline std::set<Mapping> dag_path_oracle(const MappingDag& dag,
                                         const LevelSet* from = nullptr,
                                         uint64_t budget = 5'000'000) {
  std::set<Mapping> out;
  if (dag.num_automaton_states() == 0 || !dag.final_present()) return out;
  uint64_t steps = 0;
  Mapping current;
  auto dfs = [&](auto&& self, uint32_t level, StateId q) -> void {
    if (++steps > budget) throw BudgetError("path oracle budget exceeded");
    if (level == dag.final_level()) {
      Mapping m = current;
      canonicalize(m);
      out.insert(std::move(m));
      return;
    }
    dag.for_marker_edges(level, q, [&](const std::vector<MarkerId>& markers, StateId to) {
      for (MarkerId m : markers) current.push_back({m, level});
      self(self, level, to);
      current.resize(current.size() - markers.size());
    });
    dag.for_epsilon_targets(level, q, [&](StateId to) { self(self, level + 1, to); });
    if (dag.eps_to_final(level, q)) self(self, level + 1, 0);
  };
  if (from) {
    if (from->level == dag.final_level()) {
      out.insert(Mapping{});
      return out;
    }
    for (StateId q : from->states) dfs(dfs, from->level, q);
  } else {
    StateId q0 = dag.variant() == MappingDag::Variant::General ? dag.va().initial
                                                               : dag.eva().initial;
    if (!dag.present(0, q0)) return out;
    dfs(dfs, 0, q0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// BFS oracles for the jump structures.
// ---------------------------------------------------------------------------

// Minimum level of a vertex reachable from (level, q) over epsilon and
// empty-set edges that is the final vertex or has a non-empty marker edge.
inline uint32_t jl_bfs(const MappingDag& dag, uint32_t level, StateId q) {
  std::set<std::pair<uint32_t, StateId>> seen;
  std::vector<std::pair<uint32_t, StateId>> queue = {{level, q}};
  seen.insert(queue[0]);
  uint32_t best = UINT32_MAX;
  for (size_t i = 0; i < queue.size(); ++i) {
    auto [lv, st] = queue[i];
    if (lv == dag.final_level()) {
      best = std::min(best, lv);
      continue;
    }
    bool has_marker = false;
    dag.for_marker_edges(lv, st, [&](const std::vector<MarkerId>& markers, StateId to) {
      if (!markers.empty()) has_marker = true;
      if (markers.empty() && seen.insert({lv, to}).second) queue.push_back({lv, to});
    });
    if (has_marker) best = std::min(best, lv);
    dag.for_epsilon_targets(lv, st, [&](StateId to) {
      if (seen.insert({lv + 1, to}).second) queue.push_back({lv + 1, to});
    });
    if (dag.eps_to_final(lv, st) && seen.insert({lv + 1, StateId(0)}).second)
      queue.push_back({lv + 1, 0});
  }
  return best;
}

// Is there an epsilon/empty-set path from (i,u) to (j,v) whose last edge is
// epsilon?
inline bool reach_bfs_last_eps(const MappingDag& dag, uint32_t i, StateId u, uint32_t j,
                               StateId v) {
  std::set<std::pair<uint32_t, StateId>> seen;
  std::vector<std::pair<uint32_t, StateId>> queue = {{i, u}};
  seen.insert(queue[0]);
  for (size_t k = 0; k < queue.size(); ++k) {
    auto [lv, st] = queue[k];
    if (lv >= j) continue;
    dag.for_marker_edges(lv, st, [&](const std::vector<MarkerId>& markers, StateId to) {
      if (markers.empty() && seen.insert({lv, to}).second) queue.push_back({lv, to});
    });
    dag.for_epsilon_targets(lv, st, [&](StateId to) {
      if (seen.insert({lv + 1, to}).second) queue.push_back({lv + 1, to});
    });
    if (dag.eps_to_final(lv, st) && seen.insert({lv + 1, StateId(0)}).second)
      queue.push_back({lv + 1, 0});
  }
  // The last edge must be an epsilon edge entering level j.
  for (auto [lv, st] : seen) {
    if (lv != j - 1) continue;
    bool hit = false;
    dag.for_epsilon_targets(lv, st, [&](StateId to) {
      if (j != dag.final_level() && to == v) hit = true;
    });
    if (j == dag.final_level() && dag.eps_to_final(lv, st) && v == 0) hit = true;
    if (hit) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Does the VA admit an accepting-but-invalid run on `doc`? (Oracle for
// check_sequential, per document.)
// ---------------------------------------------------------------------------

inline bool has_invalid_accepting_run(const VarAutomaton& va, std::string_view doc) {
  if (va.empty()) return false;
  size_t n = doc.size();
  // can_finish[p][q]: an accepting completion exists from (q, p), validity
  // ignored.
  std::vector<std::vector<uint8_t>> can_finish(n + 1, std::vector<uint8_t>(va.num_states, 0));
  for (size_t p = n + 1; p-- > 0;) {
    auto& cf = can_finish[p];
    if (p == n) {
      for (uint32_t q = 0; q < va.num_states; ++q) cf[q] = va.is_final(q);
    } else {
      uint8_t b = static_cast<uint8_t>(doc[p]);
      for (uint32_t q = 0; q < va.num_states; ++q) {
        va.for_letters_from(q, [&](const LetterTransition& t) {
          if (t.cls.test(b) && can_finish[p + 1][t.to]) cf[q] = 1;
        });
      }
    }
    // Close under marker moves within the position.
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& t : va.variables) {
        if (cf[t.to] && !cf[t.from]) {
          cf[t.from] = 1;
          changed = true;
        }
      }
    }
  }

  std::set<std::tuple<StateId, size_t, uint64_t>> seen;
  std::vector<std::tuple<StateId, size_t, uint64_t>> queue;
  queue.push_back({va.initial, 0, 0});
  seen.insert(queue[0]);
  bool found = false;
  for (size_t i = 0; i < queue.size() && !found; ++i) {
    auto [q, pos, packed] = queue[i];
    if (pos == n && va.is_final(q)) {
      for (uint32_t v = 0; v < va.num_vars; ++v) {
        if (((packed >> (2 * v)) & 3) == detail::kOpen) found = true;
      }
    }
    va.for_vars_from(q, [&](const VarTransition& t) {
      VarId v = marker_var(t.marker);
      uint8_t s = static_cast<uint8_t>((packed >> (2 * v)) & 3);
      bool valid = is_close(t.marker) ? (s == detail::kOpen) : (s == detail::kUnseen);
      if (!valid) {
        if (can_finish[pos][t.to]) found = true;
        return;
      }
      uint64_t np = packed;
      np &= ~(uint64_t(3) << (2 * v));
      np |= uint64_t(is_close(t.marker) ? detail::kClosed : detail::kOpen) << (2 * v);
      if (seen.insert({t.to, pos, np}).second) queue.push_back({t.to, pos, np});
    });
    if (pos < n) {
      uint8_t b = static_cast<uint8_t>(doc[pos]);
      va.for_letters_from(q, [&](const LetterTransition& t) {
        if (t.cls.test(b) && seen.insert({t.to, pos + 1, packed}).second)
          queue.push_back({t.to, pos + 1, packed});
      });
    }
  }
  return found;
}

// ---------------------------------------------------------------------------
// Random generators (all deterministic in the seed).
// ---------------------------------------------------------------------------

struct VaBuilder {
  VarAutomaton va;
  VaBuilder(uint32_t n, StateId init, std::vector<StateId> finals, uint32_t nvars,
            std::vector<std::string> names = {}) {
    va.num_states = n;
    va.initial = init;
    va.finals.assign(n, 0);
    for (StateId f : finals) va.finals[f] = 1;
    va.num_vars = nvars;
    va.var_names = std::move(names);
    if (va.var_names.empty()) {
      for (uint32_t v = 0; v < nvars; ++v) va.var_names.push_back("x" + std::to_string(v));
    }
  }
  VaBuilder& letter(StateId f, char c, StateId t) {
    va.letters.push_back({f, ByteClass::single(static_cast<uint8_t>(c)), t});
    return *this;
  }
  VaBuilder& letter_class(StateId f, ByteClass c, StateId t) {
    va.letters.push_back({f, c, t});
    return *this;
  }
  VaBuilder& open(StateId f, VarId v, StateId t) {
    va.variables.push_back({f, open_marker(v), t});
    return *this;
  }
  VaBuilder& close(StateId f, VarId v, StateId t) {
    va.variables.push_back({f, close_marker(v), t});
    return *this;
  }
  VarAutomaton build() {
    va.finish();
    return va;
  }
};

inline VarAutomaton gen_random_va(std::mt19937_64& rng, uint32_t max_states = 8,
                                  uint32_t max_vars = 3, std::string_view alphabet = "ab") {
  uint32_t n = 1 + static_cast<uint32_t>(rng() % max_states);
  uint32_t k = static_cast<uint32_t>(rng() % (max_vars + 1));
  VarAutomaton va;
  va.num_states = n;
  va.initial = 0;
  va.finals.assign(n, 0);
  va.finals[rng() % n] = 1;
  for (uint32_t q = 0; q < n; ++q)
    if (rng() % 4 == 0) va.finals[q] = 1;
  va.num_vars = k;
  for (uint32_t v = 0; v < k; ++v) va.var_names.push_back("x" + std::to_string(v));
  uint32_t letter_count = n + static_cast<uint32_t>(rng() % (2 * n + 1));
  for (uint32_t i = 0; i < letter_count; ++i) {
    char c = alphabet[rng() % alphabet.size()];
    va.letters.push_back({static_cast<StateId>(rng() % n),
                          ByteClass::single(static_cast<uint8_t>(c)),
                          static_cast<StateId>(rng() % n)});
  }
  if (k > 0) {
    uint32_t var_count = static_cast<uint32_t>(rng() % (2 * n * k + 1));
    for (uint32_t i = 0; i < var_count; ++i) {
      MarkerId m = static_cast<MarkerId>(rng() % (2 * k));
      va.variables.push_back(
          {static_cast<StateId>(rng() % n), m, static_cast<StateId>(rng() % n)});
    }
  }
  va.finish();
  return va;
}

// A trimmed sequential VA (sequentiality enforced via make_sequential when
// the random draw is not already sequential).
inline VarAutomaton gen_sequential_va(std::mt19937_64& rng, uint32_t max_states = 8,
                                      uint32_t max_vars = 3, std::string_view alphabet = "ab") {
  for (;;) {
    VarAutomaton va = trim_va(gen_random_va(rng, max_states, max_vars, alphabet));
    if (va.empty()) continue;
    if (!check_sequential(va).ok) {
      va = make_sequential(va);
      if (va.empty()) continue;
    }
    return va;
  }
}

inline std::string gen_doc(std::mt19937_64& rng, size_t max_len, std::string_view alphabet) {
  size_t len = rng() % (max_len + 1);
  std::string d(len, 'a');
  for (auto& c : d) c = alphabet[rng() % alphabet.size()];
  return d;
}

inline std::vector<std::string> all_docs(std::string_view alphabet, size_t max_len) {
  std::vector<std::string> out = {""};
  size_t begin = 0;
  for (size_t len = 1; len <= max_len; ++len) {
    size_t end = out.size();
    for (size_t i = begin; i < end; ++i) {
      for (char c : alphabet) out.push_back(out[i] + c);
    }
    begin = end;
  }
  return out;
}

// Random small AST (no parser involvement, used against the AST oracle).
inline AstNode gen_random_ast(std::mt19937_64& rng, int& budget, uint32_t& vars_used,
                              uint32_t max_vars, bool allow_capture = true) {
  budget--;
  uint32_t pick = static_cast<uint32_t>(rng() % 10);
  if (budget <= 0 || pick < 3) {
    switch (rng() % 4) {
      case 0:
        return AstNode::lit(static_cast<uint8_t>(rng() % 2 ? 'a' : 'b'));
      case 1:
        return AstNode::eps();
      case 2: {
        ByteClass c;
        if (rng() % 2) c.set('a');
        if (rng() % 2) c.set('b');
        return AstNode::char_class(c);
      }
      default:
        return AstNode::lit(static_cast<uint8_t>(rng() % 2 ? 'a' : 'b'));
    }
  }
  switch (pick) {
    case 3:
    case 4: {
      std::vector<AstNode> cs;
      cs.push_back(gen_random_ast(rng, budget, vars_used, max_vars, allow_capture));
      cs.push_back(gen_random_ast(rng, budget, vars_used, max_vars, allow_capture));
      return AstNode::nary(NodeKind::Concat, std::move(cs));
    }
    case 5:
    case 6: {
      std::vector<AstNode> cs;
      cs.push_back(gen_random_ast(rng, budget, vars_used, max_vars, allow_capture));
      cs.push_back(gen_random_ast(rng, budget, vars_used, max_vars, allow_capture));
      return AstNode::nary(NodeKind::Union, std::move(cs));
    }
    case 7:
      return AstNode::wrap(rng() % 2 ? NodeKind::Star : NodeKind::Optional,
                           gen_random_ast(rng, budget, vars_used, max_vars, allow_capture));
    case 8: {
      uint32_t lo = static_cast<uint32_t>(rng() % 3);
      uint32_t hi = lo + static_cast<uint32_t>(rng() % 3);
      return AstNode::counter(gen_random_ast(rng, budget, vars_used, max_vars, allow_capture),
                              lo, hi);
    }
    default:
      if (allow_capture && vars_used < max_vars) {
        VarId v = vars_used++;
        // Nested quantification of captures yields non-sequential automata;
        // keep random formulas sequential by construction.
        return AstNode::capture(
            v, gen_random_ast(rng, budget, vars_used, max_vars, false));
      }
      return AstNode::lit('a');
  }
}

inline RegexFormula gen_random_formula(std::mt19937_64& rng, int budget = 6,
                                       uint32_t max_vars = 2) {
  RegexFormula f;
  uint32_t vars_used = 0;
  f.root = gen_random_ast(rng, budget, vars_used, max_vars);
  for (uint32_t v = 0; v < vars_used; ++v) f.var_names.push_back("x" + std::to_string(v));
  return f;
}

// ---------------------------------------------------------------------------
// E-mail fixtures (delimiter '_', Example-2.2-like semantics).
// ---------------------------------------------------------------------------

inline ByteClass cls_not(std::string_view excluded) {
  ByteClass out;
  for (int b = 0; b < 256; ++b) {
    if (excluded.find(static_cast<char>(b)) == std::string_view::npos)
      out.set(static_cast<uint8_t>(b));
  }
  return out;
}

// States: 0 B (word boundary), 1 M (mid word), 2..5 X0..X3 (inside the
// e-mail), 6 S (just closed), 7 T (tail).
inline VarAutomaton email_va() {
  ByteClass not_us = cls_not("_");        // anything but the delimiter
  ByteClass not_at_us = cls_not("@_");    // e-mail body bytes
  VaBuilder b(8, 0, {6, 7}, 1, {"x"});
  b.letter(0, '_', 0).letter_class(0, not_us, 1).open(0, 0, 2);
  b.letter(1, '_', 0).letter_class(1, not_us, 1);
  b.letter_class(2, not_at_us, 3);
  b.letter_class(3, not_at_us, 3).letter(3, '@', 4);
  b.letter_class(4, not_at_us, 5);
  b.letter_class(5, not_at_us, 5).close(5, 0, 6);
  b.letter(6, '_', 7);
  b.letter_class(7, ByteClass::all(), 7);
  return b.build();
}

// Hand-built normalized extended replica of the same spanner. Even ids are
// ev-states, odd ids letter-states:
//   0 E_B, 1 L_B, 2 E_M, 3 L_M, 4 L_X0, 5 E_X1, 6 L_X1, 7 E_X2, 8 L_X2,
//   9 E_X3, 10 L_X3, 11 L_S, 12 E_T, 13 L_T
inline ExtendedVA email_extended_va() {
  ByteClass not_us = cls_not("_");
  ByteClass not_at_us = cls_not("@_");
  ExtendedVA e;
  e.num_states = 14;
  e.initial = 0;
  e.finals.assign(14, 0);
  e.finals[11] = e.finals[13] = 1;
  e.is_ev_state.assign(14, 0);
  for (StateId q : {0, 2, 5, 7, 9, 12}) e.is_ev_state[q] = 1;
  e.labels = {{}, {open_marker(0)}, {close_marker(0)}};
  auto ev = [&](StateId f, uint32_t label, StateId t) { e.evs.push_back({f, label, t}); };
  ev(0, 0, 1);
  ev(0, 1, 4);
  ev(2, 0, 3);
  ev(5, 0, 6);
  ev(7, 0, 8);
  ev(9, 0, 10);
  ev(9, 2, 11);
  ev(12, 0, 13);
  auto lt = [&](StateId f, ByteClass c, StateId t) { e.letters.push_back({f, c, t}); };
  lt(1, ByteClass::single('_'), 0);
  lt(1, not_us, 2);
  lt(3, ByteClass::single('_'), 0);
  lt(3, not_us, 2);
  lt(4, not_at_us, 5);
  lt(6, not_at_us, 5);
  lt(6, ByteClass::single('@'), 7);
  lt(8, not_at_us, 9);
  lt(10, not_at_us, 9);
  lt(11, ByteClass::single('_'), 12);
  lt(13, ByteClass::all(), 12);
  e.num_vars = 1;
  e.var_names = {"x"};
  e.finish();
  return e;
}

// Anchored e-mail formula: (Sigma* '_')? x{[^@_]+ @ [^@_]+} ('_' Sigma*)? .
// Compiling this AST yields a VA equivalent to email_va().
inline RegexFormula email_formula() {
  ByteClass not_at_us = cls_not("@_");
  auto sigma_star = [] {
    return AstNode::wrap(NodeKind::Star, AstNode::char_class(ByteClass::all()));
  };
  auto plus_body = [&] {
    return AstNode::wrap(NodeKind::Plus, AstNode::char_class(not_at_us));
  };
  AstNode body = AstNode::nary(
      NodeKind::Concat, [&] {
        std::vector<AstNode> cs;
        cs.push_back(plus_body());
        cs.push_back(AstNode::lit('@'));
        cs.push_back(plus_body());
        return cs;
      }());
  std::vector<AstNode> root;
  root.push_back(AstNode::wrap(
      NodeKind::Optional,
      AstNode::nary(NodeKind::Concat, [&] {
        std::vector<AstNode> cs;
        cs.push_back(sigma_star());
        cs.push_back(AstNode::lit('_'));
        return cs;
      }())));
  root.push_back(AstNode::capture(0, std::move(body)));
  root.push_back(AstNode::wrap(
      NodeKind::Optional,
      AstNode::nary(NodeKind::Concat, [&] {
        std::vector<AstNode> cs;
        cs.push_back(AstNode::lit('_'));
        cs.push_back(sigma_star());
        return cs;
      }())));
  RegexFormula f;
  f.root = AstNode::nary(NodeKind::Concat, std::move(root));
  f.var_names = {"x"};
  return f;
}

// ---------------------------------------------------------------------------
// Engine drivers.
// ---------------------------------------------------------------------------

struct EngineRun {
  std::vector<Mapping> ordered;
  std::set<Mapping> set;
  EnumStats stats;
  bool duplicate_free = true;
};

inline EngineRun run_enumeration(const MappingDag& dag, const JumpIndex& idx,
                                 std::vector<LevelSet>* record = nullptr) {
  EngineRun r;
  MappingEnumerator en(dag, idx, record);
  while (auto m = en.next()) {
    if (!r.set.insert(*m).second) r.duplicate_free = false;
    r.ordered.push_back(std::move(*m));
  }
  r.stats = en.stats();
  return r;
}

inline std::set<Mapping> general_engine_set(const VarAutomaton& va, std::string doc,
                                            JumpIndexOptions opts = {}) {
  auto dag = trim_dag(build_product_dag(std::make_shared<VarAutomaton>(va), std::move(doc)));
  if (dag.empty()) return {};
  auto idx = JumpIndex::build(dag, opts);
  return run_enumeration(dag, idx).set;
}

inline std::set<Mapping> extended_engine_set(const VarAutomaton& va, std::string doc) {
  auto eva = to_extended_va(va);
  auto dag =
      trim_dag(build_product_dag_extended(std::make_shared<ExtendedVA>(eva), std::move(doc)));
  if (dag.empty()) return {};
  auto idx = JumpIndex::build(dag);
  return run_enumeration(dag, idx).set;
}

inline Mapping span_mapping(uint32_t i, uint32_t j, VarId v = 0) {
  return {{open_marker(v), i}, {close_marker(v), j}};
}

}  // namespace spanner::testing
