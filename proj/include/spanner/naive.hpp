#pragma once

// Baseline engine without preprocessing: starts one NFA run per document
// position and reports a span for every accepting position. Only works for
// spanners with a single implicit whole-match variable; the indexed engines
// handle arbitrarily many captures.

#include <cstdint>
#include <string_view>
#include <vector>

#include "spanner/core.hpp"
#include "spanner/glushkov.hpp"
#include "spanner/regex_ast.hpp"
#include "spanner/va.hpp"

namespace spanner {

class NaiveSpanner {
 public:
  // Requires a formula of the implicit whole-match form; the inner
  // expression is compiled to a plain NFA (no padding, no markers).
  static NaiveSpanner compile(const RegexFormula& formula) {
    if (!formula.implicit_whole_match) {
      throw std::invalid_argument(
          "the naive engine only supports single-implicit-variable patterns");
    }
    // parse_regex_formula produced Concat[Sigma*, Capture(x, inner), Sigma*].
    SPANNER_ASSERT(formula.root.kind == NodeKind::Concat &&
                       formula.root.children.size() == 3 &&
                       formula.root.children[1].kind == NodeKind::Capture,
                   "unexpected shape of an implicit whole-match formula");
    RegexFormula inner;
    inner.root = formula.root.children[1].children[0];
    NaiveSpanner s;
    s.nfa_ = trim_va(compile_to_va(inner));
    return s;
  }

  // Emits the spans [i, j) whose substring matches, as f(i, j), in ascending
  // (i, j) order. Runs stop early once the state set empties.
  template <typename F>
  void enumerate(std::string_view doc, F&& f) const {
    if (nfa_.empty()) return;
    uint32_t words = (nfa_.num_states + 63) / 64;
    std::vector<uint64_t> cur(words), nxt(words);
    for (size_t i = 0; i <= doc.size(); ++i) {
      std::fill(cur.begin(), cur.end(), 0);
      cur[nfa_.initial >> 6] |= uint64_t{1} << (nfa_.initial & 63);
      bool alive = true;
      for (size_t j = i; alive; ++j) {
        // Report acceptance at position j.
        bool accept = false;
        for (uint32_t w = 0; w < words && !accept; ++w) {
          uint64_t bits = cur[w];
          while (bits) {
            StateId q = static_cast<StateId>(w * 64 + std::countr_zero(bits));
            bits &= bits - 1;
            if (nfa_.is_final(q)) {
              accept = true;
              break;
            }
          }
        }
        if (accept) f(static_cast<uint32_t>(i), static_cast<uint32_t>(j));
        if (j >= doc.size()) break;
        std::fill(nxt.begin(), nxt.end(), 0);
        uint8_t b = static_cast<uint8_t>(doc[j]);
        alive = false;
        for (uint32_t w = 0; w < words; ++w) {
          uint64_t bits = cur[w];
          while (bits) {
            StateId q = static_cast<StateId>(w * 64 + std::countr_zero(bits));
            bits &= bits - 1;
            nfa_.for_letters_from(q, [&](const LetterTransition& t) {
              if (t.cls.test(b)) {
                nxt[t.to >> 6] |= uint64_t{1} << (t.to & 63);
                alive = true;
              }
            });
          }
        }
        cur.swap(nxt);
      }
    }
  }

  // Span set as mappings over the implicit variable, for cross-checks.
  std::vector<Mapping> enumerate_mappings(std::string_view doc) const {
    std::vector<Mapping> out;
    enumerate(doc, [&](uint32_t i, uint32_t j) {
      out.push_back({{open_marker(0), i}, {close_marker(0), j}});
    });
    return out;
  }

  // Incremental form of enumerate() for streaming consumers.
  class Cursor {
   public:
    Cursor(const NaiveSpanner& s, std::string_view doc) : s_(&s), doc_(doc) {
      words_ = (s_->nfa_.num_states + 63) / 64;
      cur_.resize(words_);
      nxt_.resize(words_);
      restart();
    }

    std::optional<std::pair<uint32_t, uint32_t>> next() {
      if (s_->nfa_.empty()) return std::nullopt;
      while (start_ <= doc_.size()) {
        while (alive_) {
          bool accept = accepting();
          size_t was_at = at_;
          if (at_ >= doc_.size()) {
            alive_ = false;
          } else {
            step();
            ++at_;
          }
          if (accept) return std::make_pair(static_cast<uint32_t>(start_),
                                            static_cast<uint32_t>(was_at));
        }
        ++start_;
        if (start_ > doc_.size()) break;
        restart();
      }
      return std::nullopt;
    }

   private:
    void restart() {
      std::fill(cur_.begin(), cur_.end(), 0);
      cur_[s_->nfa_.initial >> 6] |= uint64_t{1} << (s_->nfa_.initial & 63);
      at_ = start_;
      alive_ = true;
    }
    bool accepting() const {
      for (uint32_t w = 0; w < words_; ++w) {
        uint64_t bits = cur_[w];
        while (bits) {
          StateId q = static_cast<StateId>(w * 64 + std::countr_zero(bits));
          bits &= bits - 1;
          if (s_->nfa_.is_final(q)) return true;
        }
      }
      return false;
    }
    void step() {
      std::fill(nxt_.begin(), nxt_.end(), 0);
      uint8_t b = static_cast<uint8_t>(doc_[at_]);
      bool any = false;
      for (uint32_t w = 0; w < words_; ++w) {
        uint64_t bits = cur_[w];
        while (bits) {
          StateId q = static_cast<StateId>(w * 64 + std::countr_zero(bits));
          bits &= bits - 1;
          s_->nfa_.for_letters_from(q, [&](const LetterTransition& t) {
            if (t.cls.test(b)) {
              nxt_[t.to >> 6] |= uint64_t{1} << (t.to & 63);
              any = true;
            }
          });
        }
      }
      cur_.swap(nxt_);
      alive_ = any;
    }

    const NaiveSpanner* s_;
    std::string_view doc_;
    uint32_t words_ = 0;
    std::vector<uint64_t> cur_, nxt_;
    size_t start_ = 0, at_ = 0;
    bool alive_ = true;
  };

 private:
  VarAutomaton nfa_;
};

}  // namespace spanner
