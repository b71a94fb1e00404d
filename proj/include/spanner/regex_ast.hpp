#pragma once

// Regex-formula AST and the pattern parser.
//
// Grammar (see README for the full description):
//   expr   := alt
//   alt    := concat ("|" concat)*
//   concat := item+
//   item   := atom ("*" | "+" | "?" | "{" n ("," n)? "}")?
//   atom   := literal-byte | "." | "[" class "]" | "(" alt ")" | name "{" alt "}"
//   name   := [A-Za-z_][A-Za-z0-9_]*
//
// A name followed by "{" opens a capture group unless the brace body parses
// as a counter; in that case only the byte before the brace is an atom (so
// "a{2}" is a counted literal while "a{x}" is a capture named "a").
//
// Every parsed pattern is padded with leading and trailing Sigma* so that it
// matches anywhere in the document; a pattern without captures additionally
// gets an implicit whole-match capture variable "x" around the padded body.

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "spanner/core.hpp"

namespace spanner {

enum class NodeKind {
  Literal,
  AnyChar,    // "." (any byte except newline)
  CharClass,
  Concat,
  Union,
  Star,
  Plus,
  Optional,
  Counter,
  Capture,
  Epsilon,
};

struct AstNode {
  NodeKind kind = NodeKind::Epsilon;
  uint8_t literal = 0;                // Literal
  ByteClass cls;                      // CharClass
  std::vector<AstNode> children;      // Concat/Union: n-ary; quantifiers: 1
  uint32_t min = 0, max = 0;          // Counter
  VarId var = 0;                      // Capture

  static AstNode lit(uint8_t b) {
    AstNode n;
    n.kind = NodeKind::Literal;
    n.literal = b;
    return n;
  }
  static AstNode any() {
    AstNode n;
    n.kind = NodeKind::AnyChar;
    return n;
  }
  static AstNode char_class(ByteClass c) {
    AstNode n;
    n.kind = NodeKind::CharClass;
    n.cls = c;
    return n;
  }
  static AstNode eps() { return AstNode{}; }
  static AstNode wrap(NodeKind k, AstNode child) {
    AstNode n;
    n.kind = k;
    n.children.push_back(std::move(child));
    return n;
  }
  static AstNode nary(NodeKind k, std::vector<AstNode> cs) {
    AstNode n;
    n.kind = k;
    n.children = std::move(cs);
    return n;
  }
  static AstNode counter(AstNode child, uint32_t lo, uint32_t hi) {
    AstNode n = wrap(NodeKind::Counter, std::move(child));
    n.min = lo;
    n.max = hi;
    return n;
  }
  static AstNode capture(VarId v, AstNode child) {
    AstNode n = wrap(NodeKind::Capture, std::move(child));
    n.var = v;
    return n;
  }
};

struct RegexFormula {
  AstNode root;                         // padded (and possibly capture-wrapped)
  std::vector<std::string> var_names;   // dense ids in first-occurrence order
  bool implicit_whole_match = false;    // true iff the pattern had no captures
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  AstNode parse() {
    if (text_.empty()) return AstNode::eps();
    AstNode n = parse_alt();
    if (pos_ != text_.size()) fail("unexpected character");
    return n;
  }

  std::vector<std::string>& var_names() { return var_names_; }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  bool eof() const { return pos_ >= text_.size(); }
  uint8_t peek() const { return static_cast<uint8_t>(text_[pos_]); }

  static bool is_name_start(uint8_t c) { return std::isalpha(c) || c == '_'; }
  static bool is_name_char(uint8_t c) { return std::isalnum(c) || c == '_'; }
  static bool is_meta(uint8_t c) {
    return c == '|' || c == '(' || c == ')' || c == '[' || c == ']' || c == '{' ||
           c == '}' || c == '*' || c == '+' || c == '?' || c == '.' || c == '\\';
  }

  AstNode parse_alt() {
    std::vector<AstNode> branches;
    branches.push_back(parse_concat());
    while (!eof() && peek() == '|') {
      ++pos_;
      branches.push_back(parse_concat());
    }
    if (branches.size() == 1) return std::move(branches[0]);
    return AstNode::nary(NodeKind::Union, std::move(branches));
  }

  AstNode parse_concat() {
    std::vector<AstNode> items;
    while (!eof() && peek() != '|' && peek() != ')' && peek() != '}') {
      items.push_back(parse_item());
    }
    if (items.empty()) fail("empty alternative");
    if (items.size() == 1) return std::move(items[0]);
    return AstNode::nary(NodeKind::Concat, std::move(items));
  }

  AstNode parse_item() {
    AstNode atom = parse_atom();
    if (eof()) return atom;
    uint8_t c = peek();
    if (c == '*') {
      ++pos_;
      return AstNode::wrap(NodeKind::Star, std::move(atom));
    }
    if (c == '+') {
      ++pos_;
      return AstNode::wrap(NodeKind::Plus, std::move(atom));
    }
    if (c == '?') {
      ++pos_;
      return AstNode::wrap(NodeKind::Optional, std::move(atom));
    }
    if (c == '{') {
      size_t body = pos_ + 1;
      uint32_t lo, hi;
      if (!scan_counter(body, lo, hi)) fail("malformed counter");
      if (lo > hi) fail("counter with min > max");
      pos_ = body;  // scan_counter advanced past '}'
      return AstNode::counter(std::move(atom), lo, hi);
    }
    return atom;
  }

  // Parses "n}" or "n,m}" starting at `p`; on success leaves `p` past '}'.
  bool scan_counter(size_t& p, uint32_t& lo, uint32_t& hi) const {
    if (!scan_number(p, lo)) return false;
    if (p < text_.size() && text_[p] == ',') {
      ++p;
      if (!scan_number(p, hi)) return false;
    } else {
      hi = lo;
    }
    if (p >= text_.size() || text_[p] != '}') return false;
    ++p;
    return true;
  }

  bool scan_number(size_t& p, uint32_t& out) const {
    if (p >= text_.size() || !std::isdigit(static_cast<uint8_t>(text_[p]))) return false;
    uint64_t v = 0;
    while (p < text_.size() && std::isdigit(static_cast<uint8_t>(text_[p]))) {
      v = v * 10 + (text_[p] - '0');
      if (v > 1000000) throw ParseError("counter bound too large", p);
      ++p;
    }
    out = static_cast<uint32_t>(v);
    return true;
  }

  AstNode parse_atom() {
    if (eof()) fail("expected atom");
    uint8_t c = peek();
    if (c == '.') {
      ++pos_;
      return AstNode::any();
    }
    if (c == '(') {
      ++pos_;
      AstNode inner = parse_alt();
      if (eof() || peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (c == '[') {
      ++pos_;
      return parse_class();
    }
    if (c == '\\') {
      return AstNode::lit(parse_escape());
    }
    if (c == ')' || c == ']' || c == '}' || c == '|' || c == '*' || c == '+' || c == '?' ||
        c == '{') {
      fail("unexpected character");
    }
    if (is_name_start(c)) {
      size_t run_end = pos_;
      while (run_end < text_.size() && is_name_char(static_cast<uint8_t>(text_[run_end])))
        ++run_end;
      if (run_end < text_.size() && text_[run_end] == '{') {
        size_t body = run_end + 1;
        uint32_t lo, hi;
        if (!scan_counter(body, lo, hi)) return parse_capture(run_end);
      }
    }
    ++pos_;
    return AstNode::lit(c);
  }

  AstNode parse_capture(size_t name_end) {
    std::string name(text_.substr(pos_, name_end - pos_));
    size_t name_off = pos_;
    pos_ = name_end + 1;  // past '{'
    VarId id;
    auto it = var_ids_.find(name);
    if (it != var_ids_.end()) {
      throw ParseError("duplicate capture variable '" + name + "'", name_off);
    }
    id = static_cast<VarId>(var_names_.size());
    if (id >= kMaxVariables) throw ParseError("too many capture variables", name_off);
    var_ids_.emplace(name, id);
    var_names_.push_back(name);
    AstNode inner = parse_alt();
    if (eof() || peek() != '}') fail("expected '}'");
    ++pos_;
    return AstNode::capture(id, std::move(inner));
  }

  uint8_t parse_escape() {
    ++pos_;  // consume '\'
    if (eof()) fail("dangling escape");
    uint8_t c = peek();
    if (c == '\\' || is_meta(c)) {
      ++pos_;
      return c;
    }
    fail("unknown escape");
  }

  AstNode parse_class() {
    ByteClass cls;
    bool negate = false;
    if (!eof() && peek() == '^') {
      negate = true;
      ++pos_;
    }
    while (true) {
      if (eof()) fail("unterminated character class");
      uint8_t c = peek();
      if (c == ']') break;  // "[]" is the empty class
      uint8_t lo = (c == '\\') ? parse_escape() : (++pos_, c);
      if (!eof() && peek() == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] != ']') {
        ++pos_;
        uint8_t hc = peek();
        uint8_t hi = (hc == '\\') ? parse_escape() : (++pos_, hc);
        if (lo > hi) fail("inverted class range");
        cls.set_range(lo, hi);
      } else {
        cls.set(lo);
      }
    }
    ++pos_;  // ']'
    if (negate) cls.negate();
    return AstNode::char_class(cls);
  }

  std::string_view text_;
  size_t pos_ = 0;
  std::map<std::string, VarId, std::less<>> var_ids_;
  std::vector<std::string> var_names_;
};

inline bool has_capture(const AstNode& n) {
  if (n.kind == NodeKind::Capture) return true;
  for (const auto& c : n.children)
    if (has_capture(c)) return true;
  return false;
}

}  // namespace detail

inline RegexFormula parse_regex_formula(std::string_view pattern) {
  detail::Parser p(pattern);
  AstNode body = p.parse();
  RegexFormula f;
  f.var_names = std::move(p.var_names());
  f.implicit_whole_match = !detail::has_capture(body);
  if (f.implicit_whole_match) {
    f.var_names.assign({"x"});
    body = AstNode::capture(0, std::move(body));
  }
  std::vector<AstNode> padded;
  padded.push_back(AstNode::wrap(NodeKind::Star, AstNode::char_class(ByteClass::all())));
  padded.push_back(std::move(body));
  padded.push_back(AstNode::wrap(NodeKind::Star, AstNode::char_class(ByteClass::all())));
  f.root = AstNode::nary(NodeKind::Concat, std::move(padded));
  return f;
}

// Canonical debug form, frozen by tests. Not re-parseable.
inline void node_to_string(const AstNode& n, const std::vector<std::string>& var_names,
                           std::string& out) {
  switch (n.kind) {
    case NodeKind::Epsilon:
      out += "eps";
      return;
    case NodeKind::Literal: {
      out += "(lit ";
      uint8_t b = n.literal;
      if (b >= 0x20 && b < 0x7f) {
        out += '\'';
        out += static_cast<char>(b);
        out += '\'';
      } else {
        char buf[8];
        std::snprintf(buf, sizeof buf, "0x%02x", b);
        out += buf;
      }
      out += ")";
      return;
    }
    case NodeKind::AnyChar:
      out += "any";
      return;
    case NodeKind::CharClass: {
      if (n.cls == ByteClass::all()) {
        out += "sigma";
        return;
      }
      out += "(class";
      int run_start = -1;
      for (unsigned b = 0; b <= 256; ++b) {
        bool in = b < 256 && n.cls.test(static_cast<uint8_t>(b));
        if (in && run_start < 0) run_start = static_cast<int>(b);
        if (!in && run_start >= 0) {
          char buf[16];
          if (static_cast<int>(b) - 1 == run_start)
            std::snprintf(buf, sizeof buf, " %02x", run_start);
          else
            std::snprintf(buf, sizeof buf, " %02x-%02x", run_start, b - 1);
          out += buf;
          run_start = -1;
        }
      }
      out += ")";
      return;
    }
    case NodeKind::Concat:
    case NodeKind::Union: {
      out += n.kind == NodeKind::Concat ? "(cat" : "(alt";
      for (const auto& c : n.children) {
        out += ' ';
        node_to_string(c, var_names, out);
      }
      out += ")";
      return;
    }
    case NodeKind::Star:
    case NodeKind::Plus:
    case NodeKind::Optional: {
      out += n.kind == NodeKind::Star ? "(star " : n.kind == NodeKind::Plus ? "(plus " : "(opt ";
      node_to_string(n.children[0], var_names, out);
      out += ")";
      return;
    }
    case NodeKind::Counter: {
      out += "(rep " + std::to_string(n.min) + " " + std::to_string(n.max) + " ";
      node_to_string(n.children[0], var_names, out);
      out += ")";
      return;
    }
    case NodeKind::Capture: {
      out += "(cap ";
      out += n.var < var_names.size() ? var_names[n.var] : "v" + std::to_string(n.var);
      out += ' ';
      node_to_string(n.children[0], var_names, out);
      out += ")";
      return;
    }
  }
}

inline std::string formula_to_string(const RegexFormula& f) {
  std::string out;
  node_to_string(f.root, f.var_names, out);
  return out;
}

}  // namespace spanner
