#pragma once

// Jump structure for the enumeration phase: per-vertex jump levels JL(v),
// per-level reachable-level sets Rlevel(i) = { JL(v) : level(v) = i }, and
// Boolean reachability matrices Reach(i, j). An entry Reach(i,j)[u][v] is
// true when there is a path from u to v over epsilon and empty-set edges
// whose last edge is epsilon. Matrices are computed in decreasing order on
// i: Reach(i, i+1) comes from the derived edge relation, and Reach(i, j) =
// Reach(i, i+1) x Reach(i+1, j), whose right factor always pre-exists
// because j in Rlevel(i) implies j in Rlevel(i+1).
//
// With restrict_to_query_levels (the default), JL rows, Rlevel sets and
// matrices are only persisted for the levels the enumeration can actually
// query: the closure of {0} under "jump to j in Rlevel(i), continue at
// j+1". Matrices for other levels are still produced transiently while the
// sweep runs, but never stored, which keeps the index small on documents
// where most levels are jumped over.

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "spanner/bool_matrix.hpp"
#include "spanner/mapping_dag.hpp"

namespace spanner {

struct JumpIndexOptions {
  bool restrict_to_query_levels = true;
};

class JumpIndex {
 public:
  static JumpIndex build(const MappingDag& dag, JumpIndexOptions opts = {});

  // JUMP of a level set: the vertex set at level min JL reached over
  // epsilon/empty-set paths ending in an epsilon edge. O(W^2). The second
  // form writes into a caller-owned buffer.
  LevelSet jump(const LevelSet& lam, uint64_t* steps = nullptr) const;
  void jump(const LevelSet& lam, LevelSet& out, uint64_t* steps = nullptr) const;

  uint32_t jump_level(uint32_t level, StateId q) const;
  std::vector<uint32_t> rlevel(uint32_t level) const;
  bool is_query_level(uint32_t level) const;
  bool has_matrix(uint32_t i, uint32_t j) const;
  BoolMatrix matrix(uint32_t i, uint32_t j) const;  // materialized copy
  size_t stored_matrix_count() const { return mat_targets_.size(); }

  // Distinct marker labels usable at a level (general variant only).
  std::span<const MarkerId> level_markers(uint32_t level) const;

  struct Bytes {
    size_t dag = 0, jump = 0, matrices = 0;
  };
  Bytes bytes() const;

  const MappingDag* dag() const { return dag_; }

 private:
  struct LevelEntry {
    uint32_t jl_base = 0;
    uint32_t rl_base = 0, rl_count = 0;
    uint32_t mat_base = 0, mat_count = 0;
    uint32_t mk_base = 0, mk_count = 0;
    bool has_jl = false, has_markers = false;
  };

  const LevelEntry* entry(uint32_t level) const {
    auto it = levels_.find(level);
    return it == levels_.end() ? nullptr : &it->second;
  }

  const MappingDag* dag_ = nullptr;
  std::unordered_map<uint32_t, LevelEntry> levels_;
  std::vector<uint32_t> jl_flat_;
  std::vector<uint32_t> rl_flat_;
  std::vector<uint32_t> mat_targets_;
  std::vector<uint64_t> mat_offsets_;   // parallel to mat_targets_
  std::vector<uint32_t> mat_i_;         // parallel, for size accounting/tests
  std::vector<MarkerId> markers_flat_;
  std::vector<uint8_t> arena_;
  std::vector<uint32_t> counts_;        // present vertices per level
};

namespace detail {
constexpr uint32_t kNoJump = UINT32_MAX;
}

inline JumpIndex JumpIndex::build(const MappingDag& dag, JumpIndexOptions opts) {
  SPANNER_ASSERT(dag.trimmed(), "jump index requires a trimmed DAG");
  JumpIndex idx;
  idx.dag_ = &dag;
  if (dag.empty()) return idx;

  const uint32_t n = static_cast<uint32_t>(dag.doc().size());
  const uint32_t final_level = dag.final_level();  // n + 1
  const bool extended = dag.variant() == MappingDag::Variant::Extended;

  idx.counts_.assign(final_level + 1, 0);
  for (uint32_t i = 0; i <= n; ++i) idx.counts_[i] = dag.level_count(i);
  idx.counts_[final_level] = 1;

  // Dense lists of present states per level are recomputed on the fly; the
  // sweeps below only ever need the current and the next level.
  auto present_list = [&](uint32_t level) {
    std::vector<StateId> out;
    out.reserve(idx.counts_[level]);
    dag.for_present(level, [&](StateId q) { out.push_back(q); });
    return out;
  };

  // ---- Backward sweep: JL rows and Rlevel sets for every level. ----------
  std::vector<uint32_t> jl_off(n + 2, 0);
  for (uint32_t i = 0; i <= n; ++i) jl_off[i + 1] = jl_off[i] + idx.counts_[i];
  std::vector<uint32_t> jl_all(jl_off[n + 1], detail::kNoJump);
  std::vector<uint32_t> rl_off(n + 2, 0);
  std::vector<uint32_t> rl_all;
  rl_all.reserve(n + 2);

  {
    for (uint32_t ii = n + 1; ii-- > 0;) {
      const uint32_t i = ii;
      std::vector<StateId> here = present_list(i);
      uint32_t* row = jl_all.data() + jl_off[i];

      auto rank_next = [&](StateId q) { return dag.rank(i + 1, q); };
      const uint32_t* row_next = (i < n) ? jl_all.data() + jl_off[i + 1] : nullptr;

      auto eps_min = [&](StateId q) -> uint32_t {
        uint32_t m = detail::kNoJump;
        if (i < n) {
          dag.for_epsilon_targets(i, q, [&](StateId t) {
            uint32_t v = row_next[rank_next(t)];
            if (v < m) m = v;
          });
        } else if (dag.eps_to_final(i, q)) {
          m = final_level;
        }
        return m;
      };

      if (!extended) {
        for (uint32_t r = 0; r < here.size(); ++r) {
          StateId q = here[r];
          bool has_marker = false;
          dag.for_var_edges(i, q, [&](MarkerId, StateId) { has_marker = true; });
          row[r] = has_marker ? i : eps_min(q);
          SPANNER_ASSERT(row[r] != detail::kNoJump, "trimmed vertex without jump level");
        }
      } else {
        const ExtendedVA& eva = dag.eva();
        // Letter-states first: their JL only depends on the next level.
        for (uint32_t r = 0; r < here.size(); ++r) {
          if (eva.is_ev_state[here[r]]) continue;
          row[r] = eps_min(here[r]);
        }
        for (uint32_t r = 0; r < here.size(); ++r) {
          StateId q = here[r];
          if (!eva.is_ev_state[q]) continue;
          uint32_t m = detail::kNoJump;
          bool has_marker = false;
          dag.for_ev_edges(i, q, [&](uint32_t label, StateId t) {
            if (eva.labels[label].empty()) {
              uint32_t v = row[dag.rank(i, t)];
              if (v < m) m = v;
            } else {
              has_marker = true;
            }
          });
          row[r] = has_marker ? i : m;
          SPANNER_ASSERT(row[r] != detail::kNoJump, "trimmed vertex without jump level");
        }
      }

    }
    std::vector<uint32_t> rl_rows;
    for (uint32_t i = 0; i <= n; ++i) {
      rl_off[i] = static_cast<uint32_t>(rl_all.size());
      rl_rows.assign(jl_all.begin() + jl_off[i], jl_all.begin() + jl_off[i + 1]);
      std::sort(rl_rows.begin(), rl_rows.end());
      rl_rows.erase(std::unique(rl_rows.begin(), rl_rows.end()), rl_rows.end());
      rl_all.insert(rl_all.end(), rl_rows.begin(), rl_rows.end());
    }
    rl_off[n + 1] = static_cast<uint32_t>(rl_all.size());
  }

  // ---- Query-level closure. ----------------------------------------------
  std::vector<uint8_t> in_query(final_level + 1, opts.restrict_to_query_levels ? 0 : 1);
  std::vector<uint8_t> is_target(final_level + 1, opts.restrict_to_query_levels ? 0 : 1);
  if (opts.restrict_to_query_levels) {
    in_query[0] = 1;
    for (uint32_t i = 0; i <= n; ++i) {
      if (!in_query[i]) continue;
      for (uint32_t k = rl_off[i]; k < rl_off[i + 1]; ++k) {
        uint32_t j = rl_all[k];
        is_target[j] = 1;
        if (j + 1 <= n) in_query[j + 1] = 1;  // j + 1 == final_level never queried
      }
    }
  }

  // Earliest query level that needs Reach(., j) for each target j.
  std::unordered_map<uint32_t, uint32_t> min_consumer;
  for (uint32_t i = 0; i <= n; ++i) {
    if (!in_query[i]) continue;
    for (uint32_t k = rl_off[i]; k < rl_off[i + 1]; ++k) {
      uint32_t j = rl_all[k];
      if (j <= i) continue;
      auto [it, inserted] = min_consumer.emplace(j, i);
      if (!inserted && i < it->second) it->second = i;
    }
  }

  // ---- Persist JL rows, Rlevel sets, and marker alphabets. ---------------
  for (uint32_t i = 0; i <= n; ++i) {
    bool query = in_query[i];
    bool target = is_target[i];
    if (!query && !target) continue;
    LevelEntry e;
    if (query) {
      e.has_jl = true;
      e.jl_base = static_cast<uint32_t>(idx.jl_flat_.size());
      idx.jl_flat_.insert(idx.jl_flat_.end(), jl_all.begin() + jl_off[i],
                          jl_all.begin() + jl_off[i + 1]);
      e.rl_base = static_cast<uint32_t>(idx.rl_flat_.size());
      e.rl_count = rl_off[i + 1] - rl_off[i];
      idx.rl_flat_.insert(idx.rl_flat_.end(), rl_all.begin() + rl_off[i],
                          rl_all.begin() + rl_off[i + 1]);
    }
    if (target && !extended) {
      e.has_markers = true;
      e.mk_base = static_cast<uint32_t>(idx.markers_flat_.size());
      std::vector<MarkerId> ms;
      dag.for_present(i, [&](StateId q) {
        dag.for_var_edges(i, q, [&](MarkerId m, StateId) { ms.push_back(m); });
      });
      std::sort(ms.begin(), ms.end());
      ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
      e.mk_count = static_cast<uint32_t>(ms.size());
      idx.markers_flat_.insert(idx.markers_flat_.end(), ms.begin(), ms.end());
    }
    idx.levels_[i] = e;
  }

  // ---- Matrix sweep in decreasing order on i. -----------------------------
  std::unordered_map<uint32_t, BoolMatrix> window;  // j -> Reach(i+1, j)
  std::vector<std::pair<uint32_t, const BoolMatrix*>> to_persist;
  for (uint32_t ii = n + 1; ii-- > 0;) {
    const uint32_t i = ii;
    // A = Reach(i, i+1) from the derived epsilon/empty-set edges.
    uint32_t cols = idx.counts_[i + 1];
    std::vector<StateId> here = present_list(i);
    BoolMatrix A(static_cast<uint32_t>(here.size()), cols);
    if (i == n) {
      for (uint32_t r = 0; r < here.size(); ++r) {
        if (dag.eps_to_final(i, here[r])) A.set(r, 0);
      }
    } else {
      for (uint32_t r = 0; r < here.size(); ++r) {
        dag.for_epsilon_targets(i, here[r], [&](StateId t) { A.set(r, dag.rank(i + 1, t)); });
      }
    }
    if (extended) {
      // Empty-set edges stay within the level; their contribution is the
      // epsilon row of the target letter-state.
      const ExtendedVA& eva = dag.eva();
      for (uint32_t r = 0; r < here.size(); ++r) {
        StateId q = here[r];
        if (!eva.is_ev_state[q]) continue;
        dag.for_ev_edges(i, q, [&](uint32_t label, StateId t) {
          if (!eva.labels[label].empty()) return;
          BoolMatrix::or_row(A.row(r), A.row(dag.rank(i, t)), A.stride_bytes());
        });
      }
    }

    std::unordered_map<uint32_t, BoolMatrix> next_window;
    for (auto& [j, m] : window) {
      next_window.emplace(j, bool_matrix_multiply(A, m));
    }

    if (in_query[i]) {
      to_persist.clear();
      for (uint32_t k = rl_off[i]; k < rl_off[i + 1]; ++k) {
        uint32_t j = rl_all[k];
        if (j <= i) continue;
        const BoolMatrix* m;
        if (j == i + 1) {
          m = &A;
        } else {
          auto it = next_window.find(j);
          SPANNER_ASSERT(it != next_window.end(),
                         "Reach(i+1, j) missing during the decreasing-i sweep");
          m = &it->second;
        }
        to_persist.emplace_back(j, m);
      }
      std::sort(to_persist.begin(), to_persist.end());
      auto& e = idx.levels_[i];
      e.mat_base = static_cast<uint32_t>(idx.mat_targets_.size());
      e.mat_count = static_cast<uint32_t>(to_persist.size());
      for (auto& [j, m] : to_persist) {
        idx.mat_targets_.push_back(j);
        idx.mat_i_.push_back(i);
        idx.mat_offsets_.push_back(idx.arena_.size());
        idx.arena_.insert(idx.arena_.end(), m->row(0), m->row(0) + m->byte_size());
      }
    }

    if (i == 0) break;
    // Keep Reach(i, j) alive only while a query level below still needs it.
    auto needed_below = [&](uint32_t j) {
      auto it = min_consumer.find(j);
      return it != min_consumer.end() && it->second < i;
    };
    for (auto it = next_window.begin(); it != next_window.end();) {
      if (!needed_below(it->first))
        it = next_window.erase(it);
      else
        ++it;
    }
    if (needed_below(i + 1)) next_window.emplace(i + 1, std::move(A));
    window = std::move(next_window);
  }

  return idx;
}

inline uint32_t JumpIndex::jump_level(uint32_t level, StateId q) const {
  if (level == dag_->final_level()) return level;
  const LevelEntry* e = entry(level);
  SPANNER_ASSERT(e && e->has_jl, "jump level queried outside the stored query levels");
  return jl_flat_[e->jl_base + dag_->rank(level, q)];
}

inline std::vector<uint32_t> JumpIndex::rlevel(uint32_t level) const {
  const LevelEntry* e = entry(level);
  SPANNER_ASSERT(e && e->has_jl, "Rlevel queried outside the stored query levels");
  return {rl_flat_.begin() + e->rl_base, rl_flat_.begin() + e->rl_base + e->rl_count};
}

inline bool JumpIndex::is_query_level(uint32_t level) const {
  const LevelEntry* e = entry(level);
  return e && e->has_jl;
}

inline bool JumpIndex::has_matrix(uint32_t i, uint32_t j) const {
  const LevelEntry* e = entry(i);
  if (!e) return false;
  for (uint32_t k = e->mat_base; k < e->mat_base + e->mat_count; ++k) {
    if (mat_targets_[k] == j) return true;
  }
  return false;
}

inline BoolMatrix JumpIndex::matrix(uint32_t i, uint32_t j) const {
  const LevelEntry* e = entry(i);
  SPANNER_ASSERT(e, "matrix requested for a level with no stored matrices");
  for (uint32_t k = e->mat_base; k < e->mat_base + e->mat_count; ++k) {
    if (mat_targets_[k] != j) continue;
    BoolMatrix m(counts_[i], counts_[j]);
    std::memcpy(m.row(0), arena_.data() + mat_offsets_[k], m.byte_size());
    return m;
  }
  throw std::logic_error("internal error: matrix requested for a pair not required by the index");
}

inline std::span<const MarkerId> JumpIndex::level_markers(uint32_t level) const {
  const LevelEntry* e = entry(level);
  SPANNER_ASSERT(e && e->has_markers, "marker alphabet queried outside the stored levels");
  return {markers_flat_.data() + e->mk_base, e->mk_count};
}

inline LevelSet JumpIndex::jump(const LevelSet& lam, uint64_t* steps) const {
  LevelSet out;
  jump(lam, out, steps);
  return out;
}

inline void JumpIndex::jump(const LevelSet& lam, LevelSet& out, uint64_t* steps) const {
  const uint32_t final_level = dag_->final_level();
  if (lam.level == final_level) {
    out = lam;
    return;
  }
  SPANNER_ASSERT(!lam.states.empty(), "jump of an empty level set");
  const LevelEntry* e = entry(lam.level);
  SPANNER_ASSERT(e && e->has_jl, "jump queried outside the stored query levels");

  uint32_t j = detail::kNoJump;
  for (StateId q : lam.states) {
    uint32_t v = jl_flat_[e->jl_base + dag_->rank(lam.level, q)];
    if (v < j) j = v;
  }
  if (steps) *steps += lam.states.size();
  SPANNER_ASSERT(j != detail::kNoJump, "level set without a jump level");
  if (j == lam.level) {
    out = lam;
    return;
  }

  // Union the matrix rows selected by the members of lam.
  uint64_t off = 0;
  bool found = false;
  for (uint32_t k = e->mat_base; k < e->mat_base + e->mat_count; ++k) {
    if (mat_targets_[k] == j) {
      off = mat_offsets_[k];
      found = true;
      break;
    }
  }
  SPANNER_ASSERT(found, "jump target without a stored matrix");
  uint32_t cols = counts_[j];
  uint32_t stride = BoolMatrix::stride_bytes_for(cols);
  uint8_t stack_acc[512] = {};
  std::vector<uint8_t> heap_acc;
  uint8_t* acc = stack_acc;
  if (stride > sizeof stack_acc) {
    heap_acc.assign(stride, 0);
    acc = heap_acc.data();
  }
  for (StateId q : lam.states) {
    uint32_t r = dag_->rank(lam.level, q);
    BoolMatrix::or_row(acc, arena_.data() + off + size_t(r) * stride, stride);
    if (steps) *steps += stride / 8 + 1;
  }

  out.level = j;
  out.states.clear();
  if (j == final_level) {
    SPANNER_ASSERT(acc[0] & 1u, "jump to the final level lost the final vertex");
    out.states.push_back(0);
    return;
  }
  // Translate dense column indices back to state ids: walk the set bits of
  // the accumulator and select the corresponding present states.
  uint32_t c = 0;
  dag_->for_present(j, [&](StateId q) {
    if ((acc[c >> 3] >> (c & 7)) & 1u) out.states.push_back(q);
    ++c;
  });
  if (steps) *steps += cols;
  SPANNER_ASSERT(!out.states.empty(), "JUMP produced an empty level set");
}

inline JumpIndex::Bytes JumpIndex::bytes() const {
  Bytes b;
  b.dag = dag_ ? dag_->bitmap_bytes() : 0;
  b.jump = jl_flat_.size() * sizeof(uint32_t) + rl_flat_.size() * sizeof(uint32_t) +
           markers_flat_.size() * sizeof(MarkerId) +
           levels_.size() * (sizeof(LevelEntry) + sizeof(uint32_t));
  b.matrices = arena_.size() + mat_targets_.size() * sizeof(uint32_t) +
               mat_offsets_.size() * sizeof(uint64_t);
  return b;
}

}  // namespace spanner
