#pragma once

// Position-automaton construction from a regex formula. Both byte classes
// and variable markers are treated as positions of the Glushkov construction
// over ref-words (letters interleaved with markers), which yields a VA that
// is free of epsilon transitions on its letter structure. Counters are
// expanded by duplication before positions are assigned.

#include <cstdint>
#include <vector>

#include "spanner/core.hpp"
#include "spanner/regex_ast.hpp"
#include "spanner/va.hpp"

namespace spanner {
namespace detail {

// c{lo,hi} becomes lo copies followed by (hi-lo) nested optionals.
inline AstNode expand_counters(const AstNode& n) {
  if (n.kind == NodeKind::Counter) {
    AstNode child = expand_counters(n.children[0]);
    AstNode tail = AstNode::eps();
    for (uint32_t i = n.max; i > n.min; --i) {
      std::vector<AstNode> seq;
      seq.push_back(child);
      if (tail.kind != NodeKind::Epsilon) seq.push_back(std::move(tail));
      tail = AstNode::wrap(NodeKind::Optional,
                           seq.size() == 1 ? std::move(seq[0])
                                           : AstNode::nary(NodeKind::Concat, std::move(seq)));
    }
    std::vector<AstNode> seq;
    for (uint32_t i = 0; i < n.min; ++i) seq.push_back(child);
    if (tail.kind != NodeKind::Epsilon) seq.push_back(std::move(tail));
    if (seq.empty()) return AstNode::eps();
    if (seq.size() == 1) return std::move(seq[0]);
    return AstNode::nary(NodeKind::Concat, std::move(seq));
  }
  AstNode out = n;
  out.children.clear();
  for (const auto& c : n.children) out.children.push_back(expand_counters(c));
  return out;
}

// A position is either a byte-class leaf or one side of a capture.
struct Position {
  bool is_marker;
  ByteClass cls;
  MarkerId marker;
};

struct GlushkovBuilder {
  std::vector<Position> positions;
  std::vector<std::vector<uint32_t>> follow;  // by position (1-based ids, 0 = start)

  struct NodeInfo {
    bool nullable;
    std::vector<uint32_t> first, last;
  };

  uint32_t add_position(Position p) {
    positions.push_back(std::move(p));
    follow.emplace_back();
    return static_cast<uint32_t>(positions.size());  // ids are 1-based
  }

  void link(const std::vector<uint32_t>& lasts, const std::vector<uint32_t>& firsts) {
    for (uint32_t l : lasts) {
      auto& f = follow[l - 1];
      for (uint32_t r : firsts) {
        if (std::find(f.begin(), f.end(), r) == f.end()) f.push_back(r);
      }
    }
  }

  static void append_unique(std::vector<uint32_t>& dst, const std::vector<uint32_t>& src) {
    for (uint32_t v : src) {
      if (std::find(dst.begin(), dst.end(), v) == dst.end()) dst.push_back(v);
    }
  }

  NodeInfo build(const AstNode& n) {
    switch (n.kind) {
      case NodeKind::Epsilon:
        return {true, {}, {}};
      case NodeKind::Literal: {
        uint32_t p = add_position({false, ByteClass::single(n.literal), 0});
        return {false, {p}, {p}};
      }
      case NodeKind::AnyChar: {
        uint32_t p = add_position({false, ByteClass::dot(), 0});
        return {false, {p}, {p}};
      }
      case NodeKind::CharClass: {
        uint32_t p = add_position({false, n.cls, 0});
        return {false, {p}, {p}};
      }
      case NodeKind::Capture: {
        uint32_t open = add_position({true, {}, open_marker(n.var)});
        NodeInfo c = build(n.children[0]);
        uint32_t close = add_position({true, {}, close_marker(n.var)});
        link({open}, c.first);
        link(c.last, {close});
        if (c.nullable) link({open}, {close});
        return {false, {open}, {close}};
      }
      case NodeKind::Concat: {
        NodeInfo acc{true, {}, {}};
        for (const auto& child : n.children) {
          NodeInfo c = build(child);
          link(acc.last, c.first);
          if (acc.nullable) append_unique(acc.first, c.first);
          if (c.nullable) {
            append_unique(acc.last, c.last);
          } else {
            acc.last = c.last;
          }
          acc.nullable = acc.nullable && c.nullable;
        }
        return acc;
      }
      case NodeKind::Union: {
        NodeInfo acc{false, {}, {}};
        for (const auto& child : n.children) {
          NodeInfo c = build(child);
          acc.nullable = acc.nullable || c.nullable;
          append_unique(acc.first, c.first);
          append_unique(acc.last, c.last);
        }
        return acc;
      }
      case NodeKind::Star: {
        NodeInfo c = build(n.children[0]);
        link(c.last, c.first);
        return {true, c.first, c.last};
      }
      case NodeKind::Plus: {
        NodeInfo c = build(n.children[0]);
        link(c.last, c.first);
        return {c.nullable, c.first, c.last};
      }
      case NodeKind::Optional: {
        NodeInfo c = build(n.children[0]);
        return {true, c.first, c.last};
      }
      case NodeKind::Counter:
        SPANNER_ASSERT(false, "counters must be expanded before construction");
    }
    return {true, {}, {}};
  }
};

}  // namespace detail

inline VarAutomaton compile_to_va(const RegexFormula& formula) {
  AstNode expanded = detail::expand_counters(formula.root);
  detail::GlushkovBuilder g;
  detail::GlushkovBuilder::NodeInfo info = g.build(expanded);

  VarAutomaton va;
  va.num_vars = static_cast<uint32_t>(formula.var_names.size());
  va.var_names = formula.var_names;
  va.num_states = static_cast<uint32_t>(g.positions.size()) + 1;
  va.initial = 0;
  va.finals.assign(va.num_states, 0);
  if (info.nullable) va.finals[0] = 1;
  for (uint32_t l : info.last) va.finals[l] = 1;

  auto emit = [&](StateId from, uint32_t pos_id) {
    const detail::Position& p = g.positions[pos_id - 1];
    if (p.is_marker) {
      va.variables.push_back({from, p.marker, pos_id});
    } else {
      va.letters.push_back({from, p.cls, pos_id});
    }
  };
  for (uint32_t f : info.first) emit(0, f);
  for (uint32_t p = 1; p <= g.positions.size(); ++p) {
    for (uint32_t f : g.follow[p - 1]) emit(p, f);
  }
  va.finish();
  return va;
}

}  // namespace spanner
