#pragma once

// The leveled product DAG of an automaton and a document. Level i of the DAG
// holds the vertices (q, i) for document positions 0..n, and level n+1 holds
// the distinguished final vertex. Only vertex presence is stored, as one
// bitmap bit per (state, level) with each level padded to a machine-word
// boundary; edges are derived on demand from the automaton transitions and
// the document bytes:
//
//   - epsilon edges (q,i) -> (q',i+1) for letter transitions matching d[i],
//   - marker edges (q,i) -> (q',i) within a level for variable transitions
//     (singleton labels) or ev-transitions (set labels, possibly empty),
//   - epsilon edges (q,n) -> v_f for final states q.
//
// Building computes forward reachability from (q0, 0); trim_dag() then
// removes the vertices that cannot reach the final vertex.

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "spanner/core.hpp"
#include "spanner/extended_va.hpp"
#include "spanner/va.hpp"

namespace spanner {

// A non-empty set of same-level vertices. At the final level the convention
// is a single vertex with state id 0 (the final vertex has no automaton
// state).
struct LevelSet {
  uint32_t level = 0;
  std::vector<StateId> states;  // sorted
  bool operator==(const LevelSet&) const = default;
};

struct DagStats {
  uint32_t width_W = 0;
  uint32_t complete_width_Wc = 0;
  uint32_t alphabet_size_B = 0;
  uint32_t depth_D = 0;
};

class MappingDag {
 public:
  enum class Variant { General, Extended };

  static MappingDag build(std::shared_ptr<const VarAutomaton> va, std::string doc);
  static MappingDag build(std::shared_ptr<const ExtendedVA> eva, std::string doc);

  Variant variant() const { return variant_; }
  const std::string& doc() const { return doc_; }
  uint32_t num_letter_levels() const { return static_cast<uint32_t>(doc_.size()) + 1; }
  uint32_t final_level() const { return static_cast<uint32_t>(doc_.size()) + 1; }
  uint32_t num_automaton_states() const { return num_states_; }
  uint32_t num_vars() const;
  const std::vector<std::string>& var_names() const;
  const VarAutomaton& va() const { return *va_; }
  const ExtendedVA& eva() const { return *eva_; }
  bool trimmed() const { return trimmed_; }
  bool final_present() const { return vf_present_; }
  bool empty() const;

  bool present(uint32_t level, StateId q) const {
    if (level == final_level()) return q == 0 && vf_present_;
    return (bits_[size_t(level) * stride_ + (q >> 6)] >> (q & 63)) & 1u;
  }
  uint32_t level_count(uint32_t level) const {
    if (level == final_level()) return vf_present_ ? 1 : 0;
    uint32_t c = 0;
    const uint64_t* w = &bits_[size_t(level) * stride_];
    for (uint32_t i = 0; i < stride_; ++i) c += static_cast<uint32_t>(std::popcount(w[i]));
    return c;
  }
  // Dense index of a present vertex within its level (row/column meaning of
  // the reachability matrices).
  uint32_t rank(uint32_t level, StateId q) const {
    const uint64_t* w = &bits_[size_t(level) * stride_];
    uint32_t r = 0;
    for (uint32_t i = 0; i < (q >> 6); ++i) r += static_cast<uint32_t>(std::popcount(w[i]));
    r += static_cast<uint32_t>(std::popcount(w[q >> 6] & ((uint64_t{1} << (q & 63)) - 1)));
    return r;
  }
  template <typename F>
  void for_present(uint32_t level, F&& f) const {
    const uint64_t* w = &bits_[size_t(level) * stride_];
    for (uint32_t i = 0; i < stride_; ++i) {
      uint64_t bits = w[i];
      while (bits) {
        f(static_cast<StateId>(i * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

  // Marker edges out of a present vertex, in canonical label order (single
  // markers ascending for the general variant; interned set labels with the
  // empty set last for the extended variant). f(markers, label_ok_empty,
  // target) where `markers` is a span of marker ids.
  template <typename F>
  void for_marker_edges(uint32_t level, StateId q, F&& f) const {
    if (variant_ == Variant::General) {
      va_->for_vars_from(q, [&](const VarTransition& t) {
        if (present(level, t.to)) f(std::vector<MarkerId>{t.marker}, t.to);
      });
    } else {
      eva_->for_evs_from(q, [&](const EvTransition& t) {
        if (present(level, t.to)) f(eva_->labels[t.label], t.to);
      });
    }
  }

  // Allocation-free variants of the above for the enumeration hot paths:
  // general labels as single marker ids, extended labels as interned ids.
  template <typename F>
  void for_var_edges(uint32_t level, StateId q, F&& f) const {
    va_->for_vars_from(q, [&](const VarTransition& t) {
      if (present(level, t.to)) f(t.marker, t.to);
    });
  }
  template <typename F>
  void for_ev_edges(uint32_t level, StateId q, F&& f) const {
    eva_->for_evs_from(q, [&](const EvTransition& t) {
      if (present(level, t.to)) f(t.label, t.to);
    });
  }

  // Epsilon targets at level+1 (only for levels < |d|). Targets at the last
  // letter level lead to the final vertex; see eps_to_final().
  template <typename F>
  void for_epsilon_targets(uint32_t level, StateId q, F&& f) const {
    if (level >= doc_.size()) return;
    uint8_t b = static_cast<uint8_t>(doc_[level]);
    auto visit = [&](const LetterTransition& t) {
      if (t.cls.test(b) && present(level + 1, t.to)) f(t.to);
    };
    if (variant_ == Variant::General) {
      va_->for_letters_from(q, visit);
    } else {
      eva_->for_letters_from(q, visit);
    }
  }
  bool eps_to_final(uint32_t level, StateId q) const {
    if (level != doc_.size()) return false;
    return variant_ == Variant::General ? va_->is_final(q) : eva_->is_final(q);
  }
  bool has_epsilon_out(uint32_t level, StateId q) const {
    if (level == doc_.size()) return eps_to_final(level, q);
    bool found = false;
    for_epsilon_targets(level, q, [&](StateId) { found = true; });
    return found;
  }

  // Topological order of the automaton states w.r.t. marker edges; every
  // within-level marker subgraph respects it.
  const std::vector<StateId>& marker_topo_order() const { return marker_topo_; }

  size_t bitmap_bytes() const { return bits_.size() * sizeof(uint64_t); }

  friend MappingDag trim_dag(MappingDag dag);

  void dump(std::ostream& os) const;

 private:
  void build_forward();
  void compute_marker_topo();
  template <typename Automaton>
  void marker_closure(const Automaton& a, uint64_t* level_words) const;

  Variant variant_ = Variant::General;
  std::shared_ptr<const VarAutomaton> va_;
  std::shared_ptr<const ExtendedVA> eva_;
  std::string doc_;
  uint32_t num_states_ = 0;
  uint32_t stride_ = 0;
  std::vector<uint64_t> bits_;  // (|d|+1) levels, final vertex kept aside
  bool vf_present_ = false;
  bool trimmed_ = false;
  std::vector<StateId> marker_topo_;
};

inline uint32_t MappingDag::num_vars() const {
  return variant_ == Variant::General ? va_->num_vars : eva_->num_vars;
}
inline const std::vector<std::string>& MappingDag::var_names() const {
  return variant_ == Variant::General ? va_->var_names : eva_->var_names;
}

inline bool MappingDag::empty() const {
  if (num_states_ == 0 || !vf_present_) return true;
  StateId q0 = variant_ == Variant::General ? va_->initial : eva_->initial;
  return !present(0, q0);
}

template <typename Automaton>
void MappingDag::marker_closure(const Automaton& a, uint64_t* w) const {
  // Breadth-first closure over within-level marker edges.
  std::vector<StateId> queue;
  for (uint32_t i = 0; i < stride_; ++i) {
    uint64_t bits = w[i];
    while (bits) {
      queue.push_back(static_cast<StateId>(i * 64 + std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
  auto visit_targets = [&](StateId q) {
    if constexpr (std::is_same_v<Automaton, VarAutomaton>) {
      a.for_vars_from(q, [&](const VarTransition& t) {
        if (!((w[t.to >> 6] >> (t.to & 63)) & 1u)) {
          w[t.to >> 6] |= uint64_t{1} << (t.to & 63);
          queue.push_back(t.to);
        }
      });
    } else {
      a.for_evs_from(q, [&](const EvTransition& t) {
        if (!((w[t.to >> 6] >> (t.to & 63)) & 1u)) {
          w[t.to >> 6] |= uint64_t{1} << (t.to & 63);
          queue.push_back(t.to);
        }
      });
    }
  };
  for (size_t i = 0; i < queue.size(); ++i) visit_targets(queue[i]);
}

inline void MappingDag::build_forward() {
  size_t n = doc_.size();
  stride_ = (num_states_ + 63) / 64;
  bits_.assign((n + 1) * size_t(stride_), 0);
  if (num_states_ == 0) return;

  auto set_bit = [&](uint64_t* w, StateId q) { w[q >> 6] |= uint64_t{1} << (q & 63); };

  uint64_t* level0 = &bits_[0];
  StateId q0 = variant_ == Variant::General ? va_->initial : eva_->initial;
  set_bit(level0, q0);
  if (variant_ == Variant::General)
    marker_closure(*va_, level0);
  else
    marker_closure(*eva_, level0);

  for (size_t i = 0; i < n; ++i) {
    uint64_t* cur = &bits_[i * stride_];
    uint64_t* next = &bits_[(i + 1) * stride_];
    uint8_t b = static_cast<uint8_t>(doc_[i]);
    for (uint32_t wi = 0; wi < stride_; ++wi) {
      uint64_t bits = cur[wi];
      while (bits) {
        StateId q = static_cast<StateId>(wi * 64 + std::countr_zero(bits));
        bits &= bits - 1;
        auto visit = [&](const LetterTransition& t) {
          if (t.cls.test(b)) set_bit(next, t.to);
        };
        if (variant_ == Variant::General)
          va_->for_letters_from(q, visit);
        else
          eva_->for_letters_from(q, visit);
      }
    }
    if (variant_ == Variant::General)
      marker_closure(*va_, next);
    else
      marker_closure(*eva_, next);
  }

  vf_present_ = false;
  uint64_t* last = &bits_[n * stride_];
  for (uint32_t wi = 0; wi < stride_ && !vf_present_; ++wi) {
    uint64_t bits = last[wi];
    while (bits) {
      StateId q = static_cast<StateId>(wi * 64 + std::countr_zero(bits));
      bits &= bits - 1;
      bool fin = variant_ == Variant::General ? va_->is_final(q) : eva_->is_final(q);
      if (fin) {
        vf_present_ = true;
        break;
      }
    }
  }
}

inline void MappingDag::compute_marker_topo() {
  // Kahn's algorithm over the marker-edge graph of the automaton. Sequential
  // trimmed automata have no marker cycles, which the construction relies on.
  uint32_t n = num_states_;
  std::vector<uint32_t> indeg(n, 0);
  auto for_all_marker_edges = [&](auto&& f) {
    if (variant_ == Variant::General) {
      for (const auto& t : va_->variables) f(t.from, t.to);
    } else {
      for (const auto& t : eva_->evs) f(t.from, t.to);
    }
  };
  for_all_marker_edges([&](StateId, StateId to) { indeg[to]++; });
  std::vector<StateId> order;
  order.reserve(n);
  for (uint32_t q = 0; q < n; ++q)
    if (indeg[q] == 0) order.push_back(q);
  for (size_t i = 0; i < order.size(); ++i) {
    StateId q = order[i];
    if (variant_ == Variant::General) {
      va_->for_vars_from(q, [&](const VarTransition& t) {
        if (--indeg[t.to] == 0) order.push_back(t.to);
      });
    } else {
      eva_->for_evs_from(q, [&](const EvTransition& t) {
        if (--indeg[t.to] == 0) order.push_back(t.to);
      });
    }
  }
  SPANNER_ASSERT(order.size() == n, "marker transitions of the automaton contain a cycle");
  marker_topo_ = std::move(order);
}

inline MappingDag MappingDag::build(std::shared_ptr<const VarAutomaton> va, std::string doc) {
  MappingDag d;
  d.variant_ = Variant::General;
  d.va_ = std::move(va);
  d.doc_ = std::move(doc);
  d.num_states_ = d.va_->num_states;
  d.build_forward();
  d.compute_marker_topo();
  return d;
}

inline MappingDag MappingDag::build(std::shared_ptr<const ExtendedVA> eva, std::string doc) {
  MappingDag d;
  d.variant_ = Variant::Extended;
  d.eva_ = std::move(eva);
  d.doc_ = std::move(doc);
  d.num_states_ = d.eva_->num_states;
  d.build_forward();
  d.compute_marker_topo();
  return d;
}

inline MappingDag build_product_dag(std::shared_ptr<const VarAutomaton> va, std::string doc) {
  return MappingDag::build(std::move(va), std::move(doc));
}
inline MappingDag build_product_dag_extended(std::shared_ptr<const ExtendedVA> eva,
                                             std::string doc) {
  return MappingDag::build(std::move(eva), std::move(doc));
}

// Restricts the presence bitmap to vertices that are both accessible and
// co-accessible. The mapping set is unchanged.
inline MappingDag trim_dag(MappingDag dag) {
  size_t n = dag.doc_.size();
  if (dag.num_states_ == 0) {
    dag.trimmed_ = true;
    return dag;
  }
  uint32_t stride = dag.stride_;
  std::vector<uint64_t> keep(stride, 0);  // co-accessible states at the current level
  std::vector<uint64_t> next_keep(stride, 0);
  std::vector<StateId> queue;

  auto backward_marker_closure = [&](uint64_t* k, uint32_t level) {
    queue.clear();
    for (uint32_t wi = 0; wi < stride; ++wi) {
      uint64_t bits = k[wi];
      while (bits) {
        queue.push_back(static_cast<StateId>(wi * 64 + std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
    auto add = [&](StateId p) {
      if (!dag.present(level, p)) return;
      if (!((k[p >> 6] >> (p & 63)) & 1u)) {
        k[p >> 6] |= uint64_t{1} << (p & 63);
        queue.push_back(p);
      }
    };
    for (size_t i = 0; i < queue.size(); ++i) {
      StateId q = queue[i];
      if (dag.variant_ == MappingDag::Variant::General) {
        const auto& a = *dag.va_;
        for (uint32_t j = a.var_rev_begin[q]; j < a.var_rev_begin[q + 1]; ++j)
          add(a.variables[a.var_rev[j]].from);
      } else {
        const auto& a = *dag.eva_;
        for (uint32_t j = a.ev_rev_begin[q]; j < a.ev_rev_begin[q + 1]; ++j)
          add(a.evs[a.ev_rev[j]].from);
      }
    }
  };

  // Level n: the final states reach v_f.
  for (uint32_t wi = 0; wi < stride; ++wi) {
    uint64_t bits = dag.bits_[n * stride + wi];
    uint64_t out = 0;
    while (bits) {
      StateId q = static_cast<StateId>(wi * 64 + std::countr_zero(bits));
      bits &= bits - 1;
      bool fin = dag.variant_ == MappingDag::Variant::General ? dag.va_->is_final(q)
                                                              : dag.eva_->is_final(q);
      if (fin) out |= uint64_t{1} << (q & 63);
    }
    keep[wi] = out;
  }
  backward_marker_closure(keep.data(), static_cast<uint32_t>(n));
  for (uint32_t wi = 0; wi < stride; ++wi) dag.bits_[n * stride + wi] &= keep[wi];

  for (size_t i = n; i-- > 0;) {
    // A present state survives when one of its letter transitions matches
    // d[i] and leads to a surviving state of level i+1.
    std::fill(next_keep.begin(), next_keep.end(), 0);
    uint8_t b = static_cast<uint8_t>(dag.doc_[i]);
    const uint64_t* above = &dag.bits_[(i + 1) * stride];
    for (uint32_t wi = 0; wi < stride; ++wi) {
      uint64_t bits = dag.bits_[i * stride + wi];
      while (bits) {
        StateId q = static_cast<StateId>(wi * 64 + std::countr_zero(bits));
        bits &= bits - 1;
        bool ok = false;
        auto visit = [&](const LetterTransition& t) {
          if (!ok && t.cls.test(b) && ((above[t.to >> 6] >> (t.to & 63)) & 1u)) ok = true;
        };
        if (dag.variant_ == MappingDag::Variant::General)
          dag.va_->for_letters_from(q, visit);
        else
          dag.eva_->for_letters_from(q, visit);
        if (ok) next_keep[q >> 6] |= uint64_t{1} << (q & 63);
      }
    }
    backward_marker_closure(next_keep.data(), static_cast<uint32_t>(i));
    for (uint32_t wi = 0; wi < stride; ++wi) dag.bits_[i * stride + wi] &= next_keep[wi];
  }
  dag.trimmed_ = true;
  return dag;
}

struct MarkerEdge {
  std::vector<MarkerId> markers;  // empty = the empty-set label
  StateId target;
};

// Materialized sorted adjacency of one vertex; empty-set labels come last.
inline std::vector<MarkerEdge> sorted_marker_edges(const MappingDag& dag, uint32_t level,
                                                   StateId q) {
  std::vector<MarkerEdge> out;
  dag.for_marker_edges(level, q, [&](const std::vector<MarkerId>& markers, StateId to) {
    out.push_back({markers, to});
  });
  return out;
}

inline DagStats dag_stats(const MappingDag& dag) {
  SPANNER_ASSERT(dag.trimmed(), "dag_stats expects a trimmed DAG");
  DagStats s;
  s.depth_D = dag.final_level();
  std::vector<uint8_t> seen_label;
  for (uint32_t level = 0; level <= dag.num_letter_levels() - 1; ++level) {
    uint32_t count = dag.level_count(level);
    uint32_t edges = 0;
    std::vector<std::vector<MarkerId>> labels_here;
    dag.for_present(level, [&](StateId q) {
      dag.for_marker_edges(level, q, [&](const std::vector<MarkerId>& markers, StateId) {
        ++edges;
        labels_here.push_back(markers);
      });
      dag.for_epsilon_targets(level, q, [&](StateId) { ++edges; });
      if (dag.eps_to_final(level, q)) ++edges;
    });
    std::sort(labels_here.begin(), labels_here.end());
    labels_here.erase(std::unique(labels_here.begin(), labels_here.end()), labels_here.end());
    s.width_W = std::max(s.width_W, count);
    s.complete_width_Wc = std::max(s.complete_width_Wc, count + edges);
    s.alphabet_size_B =
        std::max(s.alphabet_size_B, static_cast<uint32_t>(labels_here.size()));
  }
  s.width_W = std::max(s.width_W, dag.level_count(dag.final_level()));
  return s;
}

inline void MappingDag::dump(std::ostream& os) const {
  auto label_str = [&](const std::vector<MarkerId>& markers, uint32_t level) {
    if (markers.empty()) return std::string("{}");
    std::string s;
    for (size_t i = 0; i < markers.size(); ++i) {
      if (i) s += ',';
      s += marker_name(markers[i], var_names()) + "@" + std::to_string(level);
    }
    return s;
  };
  for (uint32_t level = 0; level < num_letter_levels(); ++level) {
    for_present(level, [&](StateId q) { os << level << ' ' << q << '\n'; });
  }
  if (vf_present_) os << final_level() << " vf\n";
  for (uint32_t level = 0; level < num_letter_levels(); ++level) {
    for_present(level, [&](StateId q) {
      for_marker_edges(level, q, [&](const std::vector<MarkerId>& markers, StateId to) {
        os << level << ' ' << q << " -> " << to << ' ' << label_str(markers, level) << '\n';
      });
      for_epsilon_targets(level, q, [&](StateId to) {
        os << level << ' ' << q << " -> " << to << " eps\n";
      });
      if (eps_to_final(level, q)) os << level << ' ' << q << " -> vf eps\n";
    });
  }
}

}  // namespace spanner
