#pragma once

// Duplicate-free enumeration of the mappings captured by a trimmed mapping
// DAG. The driver maintains a stack of frames, one per level set visited on
// the current path; every frame jumps first, then expands its level set one
// label set at a time:
//
//   - extended DAGs merge the per-vertex sorted adjacency lists and emit
//     each distinct ev-label once, empty set last;
//   - general DAGs run a flashlight search over the level's marker alphabet,
//     pruned by an S+/S- path-extendability check on the within-level
//     marker subgraph.
//
// Frames reached through an empty label set replace their parent frame (tail
// recursion elimination), which keeps the stack depth at most r+1 for a
// mapping of size r. Accumulated label sets are shared immutable chains;
// emitting a result copies O(r) pairs out.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "spanner/core.hpp"
#include "spanner/jump_index.hpp"
#include "spanner/mapping_dag.hpp"

namespace spanner {

struct EnumStats {
  uint64_t steps = 0;           // vertex/edge touches during enumeration
  uint64_t results = 0;
  uint64_t max_steps_per_result = 0;
  uint32_t max_frame_depth = 0;
  bool depth_bound_ok = true;       // frame depth <= r+1 at every emission
  bool empty_label_last_ok = true;  // empty label set emitted last per expansion
  size_t live_bytes = 0;
  size_t peak_live_bytes = 0;
};

// ---------------------------------------------------------------------------
// S+/S- path closure (the extendability check of the flashlight search).
// Vertices of a LevelGraph are dense ids; edges carry single marker labels.
// ---------------------------------------------------------------------------

struct LevelGraph {
  struct Edge {
    uint32_t from, to;
    MarkerId label;
  };
  uint32_t num_vertices = 0;
  std::vector<Edge> edges;
  std::vector<uint32_t> topo;  // topological order of vertices

  std::vector<uint32_t> in_begin, in_edge;  // CSR over incoming edges

  // Computes a topological order (throws on cycles) and the incoming CSR.
  void finalize() {
    std::vector<uint32_t> indeg(num_vertices, 0);
    for (const auto& e : edges) indeg[e.to]++;
    topo.clear();
    topo.reserve(num_vertices);
    for (uint32_t v = 0; v < num_vertices; ++v)
      if (indeg[v] == 0) topo.push_back(v);
    std::vector<std::vector<uint32_t>> out(num_vertices);
    for (uint32_t i = 0; i < edges.size(); ++i) out[edges[i].from].push_back(i);
    for (size_t i = 0; i < topo.size(); ++i) {
      for (uint32_t ei : out[topo[i]]) {
        if (--indeg[edges[ei].to] == 0) topo.push_back(edges[ei].to);
      }
    }
    SPANNER_ASSERT(topo.size() == num_vertices, "level subgraph contains a marker cycle");
    build_in_csr();
  }

  // The caller provides a valid topological order (already known for product
  // DAG levels from the automaton's marker graph).
  void finalize_with_topo(std::vector<uint32_t> order) {
    topo = std::move(order);
    build_in_csr();
  }

  // Callers that fill `topo` themselves (buffer reuse) finish with this.
  void rebuild_in_csr() { build_in_csr(); }

  void clear() {
    num_vertices = 0;
    edges.clear();
    topo.clear();
  }

  size_t memory_bytes() const {
    return edges.capacity() * sizeof(Edge) +
           (topo.capacity() + in_begin.capacity() + in_edge.capacity()) * sizeof(uint32_t);
  }

 private:
  void build_in_csr() {
    in_begin.assign(num_vertices + 1, 0);
    for (const auto& e : edges) in_begin[e.to + 1]++;
    for (uint32_t v = 0; v < num_vertices; ++v) in_begin[v + 1] += in_begin[v];
    in_edge.resize(edges.size());
    std::vector<uint32_t> cursor(in_begin.begin(), in_begin.end() - 1);
    for (uint32_t i = 0; i < edges.size(); ++i) in_edge[cursor[edges[i].to]++] = i;
  }
};

namespace detail {

// Label of the fresh source vertex added in front of the seed set.
constexpr uint64_t kSourceBit = uint64_t{1} << 63;

// chi-labeling over a topological order: chi(v) is the subset of S+ seen on
// paths from the (virtual) source to v, or the empty set when two paths
// disagree; vertices not reachable without S- labels are excluded outright.
struct SPathWorker {
  std::vector<uint64_t> chi;
  std::vector<uint8_t> reach;
  std::vector<uint8_t> seed_mask;

  template <typename OnVertex>
  void run(const LevelGraph& g, std::span<const uint32_t> seeds, uint64_t s_plus,
           uint64_t s_minus, uint64_t* steps, OnVertex&& on_vertex) {
    const uint64_t target = s_plus | kSourceBit;
    chi.assign(g.num_vertices, 0);
    reach.assign(g.num_vertices, 0);
    seed_mask.assign(g.num_vertices, 0);
    for (uint32_t s : seeds) seed_mask[s] = 1;
    if (steps) *steps += g.num_vertices;
    for (uint32_t v : g.topo) {
      uint64_t uni = 0;
      bool consistent_found = false;
      bool any = false;
      // Collect contributions twice over: once for the union, once to test
      // whether some single contribution equals it.
      auto contribs = [&](auto&& f) {
        if (seed_mask[v]) f(kSourceBit);
        for (uint32_t k = g.in_begin[v]; k < g.in_begin[v + 1]; ++k) {
          const auto& e = g.edges[g.in_edge[k]];
          uint64_t mbit = uint64_t{1} << e.label;
          if (mbit & s_minus) continue;
          if (!reach[e.from]) continue;
          f((chi[e.from] | mbit) & target);
        }
      };
      contribs([&](uint64_t c) {
        any = true;
        uni |= c;
      });
      if (steps) *steps += g.in_begin[v + 1] - g.in_begin[v];
      if (!any) continue;  // not reachable from the source
      contribs([&](uint64_t c) {
        if (c == uni) consistent_found = true;
      });
      reach[v] = 1;
      chi[v] = consistent_found ? uni : 0;
      if (reach[v] && chi[v] == target) on_vertex(v);
    }
  }

  size_t memory_bytes() const {
    return chi.capacity() * sizeof(uint64_t) + reach.capacity() + seed_mask.capacity();
  }
};

}  // namespace detail

// Vertices of `g` reachable from a seed by a path that reads every label of
// s_plus exactly once, no label of s_minus, and any others freely.
inline std::vector<uint32_t> spath_closure(const LevelGraph& g,
                                           std::span<const uint32_t> seeds, uint64_t s_plus,
                                           uint64_t s_minus, uint64_t* steps = nullptr) {
  SPANNER_ASSERT((s_plus & s_minus) == 0, "S+ and S- must be disjoint");
  detail::SPathWorker w;
  std::vector<uint32_t> out;
  w.run(g, seeds, s_plus, s_minus, steps, [&](uint32_t v) { out.push_back(v); });
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// NEXTLEVEL cursors.
// ---------------------------------------------------------------------------

// Flashlight search over the decision tree of the level's marker alphabet
// (general DAGs). Explores +m before -m, so the empty positive set, if
// usable, is produced last.
class FlashlightCursor {
 public:
  FlashlightCursor() = default;
  FlashlightCursor(const MappingDag& dag, std::span<const MarkerId> order, const LevelSet& lam,
                   EnumStats* stats) {
    reset(dag, order, lam, stats);
  }

  // Pre-sizes the internal buffers so a later reset avoids fresh pages.
  void warm(uint32_t states_hint, uint32_t labels_hint) {
    vertex_state_.reserve(states_hint);
    g_.edges.reserve(states_hint * 2);
    g_.topo.reserve(states_hint);
    g_.in_begin.reserve(states_hint + 1);
    g_.in_edge.reserve(states_hint * 2);
    has_eps_.reserve(states_hint);
    seeds_.reserve(states_hint);
    endpoints_.reserve(states_hint);
    order_.reserve(labels_hint);
    prefix_mask_.reserve(labels_hint + 1);
    branch_.reserve(labels_hint);
    worker_.chi.reserve(states_hint);
    worker_.reach.reserve(states_hint);
    worker_.seed_mask.reserve(states_hint);
  }

  // Re-targets the cursor; all buffers keep their capacity.
  void reset(const MappingDag& dag, std::span<const MarkerId> order, const LevelSet& lam,
             EnumStats* stats) {
    dag_ = &dag;
    level_ = lam.level;
    stats_ = stats;
    started_ = done_ = emitted_empty_ = false;
    pmask_ = 0;
    branch_.clear();
    endpoints_.clear();
    SPANNER_ASSERT(level_ < dag.final_level(), "NEXTLEVEL at the final vertex");
    order_.assign(order.begin(), order.end());
    // Dense vertex numbering of the level, in ascending state order.
    vertex_state_.clear();
    dag.for_present(level_, [&](StateId q) { vertex_state_.push_back(q); });
    g_.clear();
    g_.num_vertices = static_cast<uint32_t>(vertex_state_.size());
    for (uint32_t r = 0; r < vertex_state_.size(); ++r) {
      dag.for_var_edges(level_, vertex_state_[r], [&](MarkerId m, StateId to) {
        g_.edges.push_back({r, dag.rank(level_, to), m});
      });
    }
    for (StateId q : dag.marker_topo_order()) {
      if (dag.present(level_, q)) g_.topo.push_back(dag.rank(level_, q));
    }
    g_.rebuild_in_csr();
    has_eps_.assign(g_.num_vertices, 0);
    for (uint32_t r = 0; r < vertex_state_.size(); ++r)
      has_eps_[r] = dag.has_epsilon_out(level_, vertex_state_[r]);
    seeds_.clear();
    for (StateId q : lam.states) seeds_.push_back(dag.rank(level_, q));
    prefix_mask_.assign(order_.size() + 1, 0);
    for (size_t d = 0; d < order_.size(); ++d)
      prefix_mask_[d + 1] = prefix_mask_[d] | (uint64_t{1} << order_[d]);
  }

  bool next(std::vector<MarkerId>& markers_out, LevelSet& next_out) {
    if (done_) return false;
    if (!started_) {
      started_ = true;
      if (!good(0, 0)) {  // cannot happen on trimmed input
        done_ = true;
        return false;
      }
      descend();
    } else {
      bool more = backtrack();
      if (emitted_empty_) {
        // The all-minus leaf is the last leaf in exploration order.
        if (more && stats_) stats_->empty_label_last_ok = false;
        done_ = true;
        return false;
      }
      if (!more) {
        done_ = true;
        return false;
      }
    }
    emit(markers_out, next_out);
    return true;
  }

  size_t memory_bytes() const {
    return g_.memory_bytes() + worker_.memory_bytes() +
           (vertex_state_.capacity() + seeds_.capacity() + endpoints_.capacity()) *
               sizeof(uint32_t) +
           has_eps_.capacity() + branch_.capacity() +
           (order_.capacity() + prefix_mask_.capacity()) * sizeof(uint64_t);
  }

 private:
  uint64_t nmask_at(size_t depth, uint64_t pmask) const {
    return prefix_mask_[depth] & ~pmask;
  }

  bool good(uint64_t pmask, uint64_t nmask) {
    endpoints_.clear();
    worker_.run(g_, seeds_, pmask, nmask, stats_ ? &stats_->steps : nullptr, [&](uint32_t v) {
      if (has_eps_[v]) endpoints_.push_back(v);
    });
    return !endpoints_.empty();
  }

  // From a good node at depth branch_.size(), walk down to a good leaf.
  void descend() {
    while (branch_.size() < order_.size()) {
      size_t d = branch_.size();
      uint64_t mbit = uint64_t{1} << order_[d];
      if (good(pmask_ | mbit, nmask_at(d + 1, pmask_ | mbit))) {
        branch_.push_back(0);
        pmask_ |= mbit;
      } else {
        bool ok = good(pmask_, nmask_at(d + 1, pmask_));
        SPANNER_ASSERT(ok, "good node without a good child in the flashlight search");
        branch_.push_back(1);
      }
    }
  }

  // Moves to the next unexplored good node, if any, and descends to a leaf.
  bool backtrack() {
    while (!branch_.empty()) {
      size_t d = branch_.size() - 1;
      uint8_t b = branch_.back();
      branch_.pop_back();
      if (b == 0) {
        pmask_ &= ~(uint64_t{1} << order_[d]);
        if (good(pmask_, nmask_at(d + 1, pmask_))) {
          branch_.push_back(1);
          descend();
          return true;
        }
      }
    }
    return false;
  }

  void emit(std::vector<MarkerId>& markers_out, LevelSet& next_out) {
    markers_out.clear();
    for (MarkerId m : order_) {
      if (pmask_ & (uint64_t{1} << m)) markers_out.push_back(m);
    }
    std::sort(markers_out.begin(), markers_out.end());
    if (pmask_ == 0) emitted_empty_ = true;
    next_out.level = level_ + 1;
    next_out.states.clear();
    if (level_ == dag_->doc().size()) {
      next_out.states = {0};  // the final vertex
      return;
    }
    for (uint32_t v : endpoints_) {
      dag_->for_epsilon_targets(level_, vertex_state_[v],
                                [&](StateId t) { next_out.states.push_back(t); });
      if (stats_) ++stats_->steps;
    }
    std::sort(next_out.states.begin(), next_out.states.end());
    next_out.states.erase(std::unique(next_out.states.begin(), next_out.states.end()),
                          next_out.states.end());
    SPANNER_ASSERT(!next_out.states.empty(), "NEXTLEVEL produced an empty continuation");
  }

  const MappingDag* dag_ = nullptr;
  uint32_t level_ = 0;
  std::vector<MarkerId> order_;  // the level's possible labels, ascending
  LevelGraph g_;
  std::vector<StateId> vertex_state_;
  std::vector<uint32_t> seeds_;
  std::vector<uint8_t> has_eps_;
  std::vector<uint64_t> prefix_mask_;
  std::vector<uint8_t> branch_;  // 0 = in the +m child, 1 = in the -m child
  uint64_t pmask_ = 0;
  std::vector<uint32_t> endpoints_;
  detail::SPathWorker worker_;
  bool started_ = false, done_ = false, emitted_empty_ = false;
  EnumStats* stats_;
};

// K-way merge over the per-vertex sorted ev-adjacency lists (extended DAGs):
// each distinct label present at the level is emitted exactly once, in
// canonical order, the empty set last.
class MergeCursor {
 public:
  MergeCursor() = default;
  MergeCursor(const MappingDag& dag, const LevelSet& lam, EnumStats* stats) {
    reset(dag, lam, stats);
  }

  void warm(uint32_t states_hint) {
    pos_.reserve(states_hint);
    end_.reserve(states_hint);
    targets_.reserve(states_hint);
  }

  void reset(const MappingDag& dag, const LevelSet& lam, EnumStats* stats) {
    dag_ = &dag;
    eva_ = &dag.eva();
    level_ = lam.level;
    stats_ = stats;
    emitted_empty_ = false;
    SPANNER_ASSERT(level_ < dag.final_level(), "NEXTLEVEL at the final vertex");
    pos_.clear();
    end_.clear();
    for (StateId q : lam.states) {
      pos_.push_back(eva_->ev_begin[q]);
      end_.push_back(eva_->ev_begin[q + 1]);
    }
  }

  bool next(std::vector<MarkerId>& markers_out, LevelSet& next_out) {
    // Heads skip edges whose target did not survive trimming.
    auto settle = [&](size_t j) {
      while (pos_[j] < end_[j] && !dag_->present(level_, eva_->evs[pos_[j]].to)) {
        ++pos_[j];
        if (stats_) ++stats_->steps;
      }
    };
    uint32_t best_rank = UINT32_MAX;
    for (size_t j = 0; j < pos_.size(); ++j) {
      settle(j);
      if (pos_[j] < end_[j]) {
        uint32_t r = eva_->label_rank[eva_->evs[pos_[j]].label];
        if (r < best_rank) best_rank = r;
      }
      if (stats_) ++stats_->steps;
    }
    if (best_rank == UINT32_MAX) return false;
    if (stats_ && emitted_empty_) stats_->empty_label_last_ok = false;

    uint32_t label_id = UINT32_MAX;
    targets_.clear();
    for (size_t j = 0; j < pos_.size(); ++j) {
      while (pos_[j] < end_[j]) {
        const EvTransition& t = eva_->evs[pos_[j]];
        if (eva_->label_rank[t.label] != best_rank) break;
        label_id = t.label;
        targets_.push_back(t.to);
        ++pos_[j];
        if (stats_) ++stats_->steps;
        settle(j);
      }
    }
    std::sort(targets_.begin(), targets_.end());
    targets_.erase(std::unique(targets_.begin(), targets_.end()), targets_.end());

    markers_out = eva_->labels[label_id];
    if (markers_out.empty()) emitted_empty_ = true;
    next_out.level = level_ + 1;
    next_out.states.clear();
    if (level_ == dag_->doc().size()) {
      next_out.states = {0};
    } else {
      for (StateId v2 : targets_) {
        dag_->for_epsilon_targets(level_, v2,
                                  [&](StateId t) { next_out.states.push_back(t); });
        if (stats_) ++stats_->steps;
      }
      std::sort(next_out.states.begin(), next_out.states.end());
      next_out.states.erase(std::unique(next_out.states.begin(), next_out.states.end()),
                            next_out.states.end());
    }
    SPANNER_ASSERT(!next_out.states.empty(), "NEXTLEVEL produced an empty continuation");
    return true;
  }

  size_t memory_bytes() const {
    return (pos_.capacity() + end_.capacity() + targets_.capacity()) * sizeof(uint32_t);
  }

 private:
  const MappingDag* dag_ = nullptr;
  const ExtendedVA* eva_ = nullptr;
  uint32_t level_ = 0;
  std::vector<uint32_t> pos_, end_;
  std::vector<StateId> targets_;
  bool emitted_empty_ = false;
  EnumStats* stats_;
};

// ---------------------------------------------------------------------------
// The enumeration driver.
// ---------------------------------------------------------------------------

struct ChainNode {
  std::shared_ptr<const ChainNode> parent;
  uint32_t level;
  std::vector<MarkerId> markers;
};

inline Mapping chain_to_mapping(const ChainNode* chain) {
  Mapping m;
  for (const ChainNode* c = chain; c; c = c->parent.get()) {
    for (MarkerId mk : c->markers) m.push_back({mk, c->level});
  }
  canonicalize(m);
  SPANNER_ASSERT(mapping_is_valid(m), "enumerated label union is not a valid mapping");
  return m;
}

class MappingEnumerator {
 public:
  MappingEnumerator(const MappingDag& dag, const JumpIndex& idx,
                    std::vector<LevelSet>* record_jump_inputs = nullptr)
      : dag_(&dag), idx_(&idx), record_(record_jump_inputs) {
    SPANNER_ASSERT(dag.trimmed(), "enumeration requires a trimmed DAG");
    if (!dag.empty()) {
      // Pre-size a handful of frame slots so the first results do not fault
      // in fresh pages mid-measurement.
      uint32_t states_hint = std::min<uint32_t>(64, dag.num_automaton_states());
      uint32_t labels_hint = std::min<uint32_t>(16, 2 * dag.num_vars());
      stack_.resize(8);
      for (Frame& f : stack_) {
        f.lam.states.reserve(states_hint);
        f.fl.warm(states_hint, labels_hint);
        if (dag.variant() == MappingDag::Variant::Extended) f.mg.warm(states_hint);
      }
      nxt_.states.reserve(states_hint);
      markers_.reserve(labels_hint);
      StateId q0 = dag.variant() == MappingDag::Variant::General ? dag.va().initial
                                                                 : dag.eva().initial;
      scratch_.level = 0;
      scratch_.states.assign(1, q0);
      enter_frame(scratch_, nullptr, 0);
    }
  }

  std::optional<Mapping> next() {
    while (depth_ > 0) {
      Frame& top = stack_[depth_ - 1];
      if (top.is_final) {
        Mapping m = chain_to_mapping(top.chain.get());
        note_emission(top.chain_len);
        pop_frame();
        return m;
      }
      bool got = dag_->variant() == MappingDag::Variant::General ? top.fl.next(markers_, nxt_)
                                                                 : top.mg.next(markers_, nxt_);
      if (!got) {
        pop_frame();
        continue;
      }
      if (markers_.empty()) {
        // Tail case: nothing further can come out of this frame; reuse its
        // slot in place.
        auto chain = top.chain;
        uint32_t len = top.chain_len;
        pop_frame();
        enter_frame(nxt_, std::move(chain), len);
      } else {
        auto chain = std::make_shared<ChainNode>(
            ChainNode{top.chain, top.lam.level, markers_});
        uint32_t len = top.chain_len + static_cast<uint32_t>(markers_.size());
        enter_frame(nxt_, std::move(chain), len);
      }
    }
    return std::nullopt;
  }

  const EnumStats& stats() const { return stats_; }

 private:
  struct Frame {
    LevelSet lam;  // after the jump
    FlashlightCursor fl;
    MergeCursor mg;
    std::shared_ptr<const ChainNode> chain;
    uint32_t chain_len = 0;
    bool is_final = false;
    size_t bytes = 0;
  };

  // Occupies the next stack slot (frame buffers persist across reuse).
  void enter_frame(const LevelSet& pre_jump, std::shared_ptr<const ChainNode> chain,
                   uint32_t chain_len) {
    if (record_) record_->push_back(pre_jump);
    if (stack_.size() == depth_) stack_.emplace_back();
    Frame& f = stack_[depth_];
    ++depth_;
    idx_->jump(pre_jump, f.lam, &stats_.steps);
    f.chain = std::move(chain);
    f.chain_len = chain_len;
    f.is_final = f.lam.level == dag_->final_level();
    if (!f.is_final) {
      if (dag_->variant() == MappingDag::Variant::General) {
        f.fl.reset(*dag_, idx_->level_markers(f.lam.level), f.lam, &stats_);
      } else {
        f.mg.reset(*dag_, f.lam, &stats_);
      }
    }
    f.bytes = frame_bytes(f);
    stats_.live_bytes += f.bytes;
    stats_.peak_live_bytes = std::max(stats_.peak_live_bytes, stats_.live_bytes);
    stats_.max_frame_depth = std::max(stats_.max_frame_depth, static_cast<uint32_t>(depth_));
  }

  size_t frame_bytes(const Frame& f) const {
    size_t b = sizeof(Frame) + f.lam.states.capacity() * sizeof(StateId);
    if (!f.is_final) {
      if (dag_->variant() == MappingDag::Variant::General) b += f.fl.memory_bytes();
      if (dag_->variant() == MappingDag::Variant::Extended) b += f.mg.memory_bytes();
    }
    if (f.chain) b += sizeof(ChainNode) + f.chain->markers.capacity() * sizeof(MarkerId);
    return b;
  }

  void pop_frame() {
    Frame& f = stack_[depth_ - 1];
    stats_.live_bytes -= f.bytes;
    f.chain.reset();
    --depth_;
  }

  void note_emission(uint32_t r) {
    ++stats_.results;
    if (depth_ > size_t(r) + 1) stats_.depth_bound_ok = false;
    uint64_t delta = stats_.steps - steps_at_last_emit_;
    steps_at_last_emit_ = stats_.steps;
    stats_.max_steps_per_result = std::max(stats_.max_steps_per_result, delta);
  }

  const MappingDag* dag_;
  const JumpIndex* idx_;
  std::vector<LevelSet>* record_;
  std::vector<Frame> stack_;  // high-water storage; depth_ frames are live
  size_t depth_ = 0;
  LevelSet scratch_;
  std::vector<MarkerId> markers_;
  LevelSet nxt_;
  EnumStats stats_;
  uint64_t steps_at_last_emit_ = 0;
};

// ---------------------------------------------------------------------------
// Free helpers mirroring the per-operation surface (used by tests and the
// oracle harness; the enumerator drives the cursors directly).
// ---------------------------------------------------------------------------

inline std::vector<std::pair<std::vector<MarkerId>, LevelSet>> next_level_extended(
    const MappingDag& dag, const LevelSet& lam) {
  MergeCursor cur(dag, lam, nullptr);
  std::vector<std::pair<std::vector<MarkerId>, LevelSet>> out;
  std::vector<MarkerId> mk;
  LevelSet ls;
  while (cur.next(mk, ls)) out.emplace_back(mk, ls);
  return out;
}

inline std::vector<std::pair<std::vector<MarkerId>, LevelSet>> next_level_flashlight(
    const MappingDag& dag, const LevelSet& lam) {
  std::vector<MarkerId> order;
  dag.for_present(lam.level, [&](StateId q) {
    dag.for_var_edges(lam.level, q, [&](MarkerId m, StateId) { order.push_back(m); });
  });
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  FlashlightCursor cur(dag, order, lam, nullptr);
  std::vector<std::pair<std::vector<MarkerId>, LevelSet>> out;
  std::vector<MarkerId> mk;
  LevelSet ls;
  while (cur.next(mk, ls)) out.emplace_back(mk, ls);
  return out;
}

}  // namespace spanner
