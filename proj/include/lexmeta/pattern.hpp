// Copyright 2026 The lexmeta authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexmeta/core.hpp"
#include "lexmeta/error.hpp"
#include "lexmeta/tree.hpp"

namespace lexmeta {

// Constituency tree patterns.
//
//   pattern   := nodeexpr
//   nodeexpr  := labeltest ("=t")? relation*
//   relation  := "!"? relop operand ("&" "!"? relop operand)*
//   relop     := "<" | "<<" | "$"
//   operand   := labeltest | "(" nodeexpr ")"
//   labeltest := IDENT | "__" | "marker:" IDENT
//
// "<" tests an immediate child, "<<" a proper descendant, "$" a sister.
// "__" matches any label. "marker:C" holds on a node when some occurrence
// of concept C lies inside the node's yield. A bare "marker:C" to the right
// of "<<" is special-cased to that same yield test on the left node, so a
// multi-word marker still counts when it crosses constituent boundaries.
// Exactly one node carries the "=t" capture; when absent, the root node is
// the capture. Each tree node satisfying the root expression produces one
// match, in document order; witness bindings pick the first document-order
// node at every positive relation.

struct PatternNode {
  enum class Test { label, wildcard, marker };
  enum class Op { child, descendant, sister };

  struct Rel {
    Op op;
    bool negated = false;
    int operand = -1;
  };

  Test test = Test::label;
  std::string label;
  Concept marker{};
  bool capture = false;
  std::vector<Rel> rels;
};

struct TreePattern {
  std::string text;
  std::vector<PatternNode> nodes;  // 0 is the root expression
  int capture_node = 0;

  const PatternNode& at(int i) const { return nodes[i]; }
};

struct Match {
  int target = -1;  // tree node bound by the capture
  int root = -1;    // tree node satisfying the root expression
  std::vector<std::pair<int, int>> bindings;  // (pattern node, tree node)
};

namespace detail {

struct PatternToken {
  enum class Kind { lparen, rparen, amp, bang, lt, ltlt, dollar, capture, ident, wildcard, marker, end };
  Kind kind;
  int pos = 0;
  std::string text;     // ident
  Concept marker{};     // marker
};

inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

inline std::vector<PatternToken> tokenize_pattern(std::string_view src) {
  std::vector<PatternToken> out;
  size_t i = 0;
  auto syntax = [&](const std::string& msg) {
    fail(Errc::syntax, "pattern offset " + std::to_string(i) + ": " + msg);
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    int pos = static_cast<int>(i);
    switch (c) {
      case '(': out.push_back({PatternToken::Kind::lparen, pos}); ++i; continue;
      case ')': out.push_back({PatternToken::Kind::rparen, pos}); ++i; continue;
      case '&': out.push_back({PatternToken::Kind::amp, pos}); ++i; continue;
      case '!': out.push_back({PatternToken::Kind::bang, pos}); ++i; continue;
      case '$': out.push_back({PatternToken::Kind::dollar, pos}); ++i; continue;
      case '<':
        if (i + 1 < src.size() && src[i + 1] == '<') {
          out.push_back({PatternToken::Kind::ltlt, pos});
          i += 2;
        } else {
          out.push_back({PatternToken::Kind::lt, pos});
          ++i;
        }
        continue;
      case '=':
        if (i + 1 < src.size() && src[i + 1] == 't' && (i + 2 >= src.size() || !ident_char(src[i + 2]))) {
          out.push_back({PatternToken::Kind::capture, pos});
          i += 2;
        } else {
          syntax("expected '=t'");
        }
        continue;
      case '>':
      case '%':
      case '^':
      case '~':
      case '+':
      case '.':
      case ',':
      case '|':
        fail(Errc::unknown_relation_operator,
             "pattern offset " + std::to_string(pos) + ": unsupported relation operator '" +
                 std::string(1, c) + "'");
      default: break;
    }
    if (!ident_char(c)) syntax(std::string("unexpected character '") + c + "'");
    size_t start = i;
    while (i < src.size() && ident_char(src[i])) ++i;
    std::string word(src.substr(start, i - start));
    if (word == "marker" && i < src.size() && src[i] == ':') {
      ++i;
      size_t cstart = i;
      while (i < src.size() && ident_char(src[i])) ++i;
      std::string cname(src.substr(cstart, i - cstart));
      if (cname.empty()) syntax("expected a concept name after 'marker:'");
      auto concept_id = concept_from_string(cname);
      if (!concept_id) syntax("unknown concept '" + cname + "'");
      PatternToken t{PatternToken::Kind::marker, pos};
      t.marker = *concept_id;
      out.push_back(t);
      continue;
    }
    if (i < src.size() && src[i] == ':') syntax("unexpected ':'");
    if (word == "__") {
      out.push_back({PatternToken::Kind::wildcard, pos});
    } else {
      PatternToken t{PatternToken::Kind::ident, pos};
      t.text = word;
      out.push_back(t);
    }
  }
  out.push_back({PatternToken::Kind::end, static_cast<int>(src.size())});
  return out;
}

class PatternParser {
 public:
  explicit PatternParser(std::string_view src) : src_(src), tokens_(tokenize_pattern(src)) {}

  TreePattern parse() {
    TreePattern p;
    p.text = std::string(src_);
    pattern_ = &p;
    int root = nodeexpr();
    (void)root;
    expect(PatternToken::Kind::end, "trailing input");
    if (captures_.size() > 1)
      fail(Errc::multiple_captures, "pattern has " + std::to_string(captures_.size()) + " '=t' captures");
    p.capture_node = captures_.empty() ? 0 : captures_[0];
    check_capture_reachable(p);
    return p;
  }

 private:
  const PatternToken& peek() const { return tokens_[cursor_]; }
  PatternToken take() { return tokens_[cursor_++]; }

  [[noreturn]] void syntax_here(const std::string& msg) const {
    fail(Errc::syntax, "pattern offset " + std::to_string(peek().pos) + ": " + msg);
  }

  void expect(PatternToken::Kind k, const std::string& what) {
    if (peek().kind != k) syntax_here(what);
    ++cursor_;
  }

  static bool is_relop(PatternToken::Kind k) {
    return k == PatternToken::Kind::lt || k == PatternToken::Kind::ltlt ||
           k == PatternToken::Kind::dollar;
  }

  int labeltest() {
    PatternNode node;
    switch (peek().kind) {
      case PatternToken::Kind::ident:
        node.test = PatternNode::Test::label;
        node.label = take().text;
        break;
      case PatternToken::Kind::wildcard:
        node.test = PatternNode::Test::wildcard;
        take();
        break;
      case PatternToken::Kind::marker:
        node.test = PatternNode::Test::marker;
        node.marker = take().marker;
        break;
      default:
        syntax_here("expected a node label, '__', or 'marker:'");
    }
    pattern_->nodes.push_back(std::move(node));
    return static_cast<int>(pattern_->nodes.size()) - 1;
  }

  int nodeexpr() {
    int self = labeltest();
    if (peek().kind == PatternToken::Kind::capture) {
      take();
      pattern_->nodes[self].capture = true;
      captures_.push_back(self);
    }
    while (true) {
      bool negated = false;
      if (peek().kind == PatternToken::Kind::amp) {
        take();
        if (peek().kind == PatternToken::Kind::bang) {
          take();
          negated = true;
        }
        if (!is_relop(peek().kind)) syntax_here("expected a relation operator after '&'");
      } else if (peek().kind == PatternToken::Kind::bang) {
        take();
        negated = true;
        if (!is_relop(peek().kind)) syntax_here("expected a relation operator after '!'");
      } else if (!is_relop(peek().kind)) {
        break;
      }
      PatternNode::Rel rel;
      rel.negated = negated;
      switch (take().kind) {
        case PatternToken::Kind::lt: rel.op = PatternNode::Op::child; break;
        case PatternToken::Kind::ltlt: rel.op = PatternNode::Op::descendant; break;
        case PatternToken::Kind::dollar: rel.op = PatternNode::Op::sister; break;
        default: syntax_here("expected a relation operator");
      }
      rel.operand = operand();
      pattern_->nodes[self].rels.push_back(rel);
    }
    return self;
  }

  int operand() {
    switch (peek().kind) {
      case PatternToken::Kind::lparen: {
        take();
        int inner = nodeexpr();
        expect(PatternToken::Kind::rparen, "expected ')'");
        return inner;
      }
      case PatternToken::Kind::ident:
      case PatternToken::Kind::wildcard:
      case PatternToken::Kind::marker: {
        int self = labeltest();
        if (peek().kind == PatternToken::Kind::capture) {
          take();
          pattern_->nodes[self].capture = true;
          captures_.push_back(self);
        }
        return self;
      }
      default:
        syntax_here("expected a relation operand");
    }
  }

  // The capture must be reachable through positive relations so a witness
  // node always exists for it.
  void check_capture_reachable(const TreePattern& p) const {
    std::vector<char> seen(p.nodes.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int n = stack.back();
      stack.pop_back();
      for (const auto& rel : p.nodes[n].rels)
        if (!rel.negated && !seen[rel.operand]) {
          seen[rel.operand] = 1;
          stack.push_back(rel.operand);
        }
    }
    if (!seen[p.capture_node])
      fail(Errc::syntax, "the '=t' capture sits under a negated relation");
  }

  std::string_view src_;
  std::vector<PatternToken> tokens_;
  size_t cursor_ = 0;
  TreePattern* pattern_ = nullptr;
  std::vector<int> captures_;
};

}  // namespace detail

inline TreePattern compile_pattern(std::string_view src) {
  return detail::PatternParser(src).parse();
}

// Supplies the marker occurrences of a concept within the statement the tree
// belongs to. Queried lazily, at most once per concept per match run.
using MarkerOracle = std::function<std::vector<Span>(Concept)>;

namespace detail {

class PatternMatcher {
 public:
  PatternMatcher(const TreePattern& p, const ConstituencyTree& tree, const MarkerOracle& markers)
      : p_(p), tree_(tree), markers_(markers) {
    const int n = static_cast<int>(tree.nodes.size());
    subtree_end_.assign(n, 0);
    for (int i = n - 1; i >= 0; --i) {
      int end = i + 1;
      if (!tree.nodes[i].children.empty()) end = subtree_end_[tree.nodes[i].children.back()];
      subtree_end_[i] = end;
    }
    memo_.assign(p.nodes.size() * n, 0);
  }

  std::vector<Match> run() {
    std::vector<Match> out;
    for (int n = 0; n < static_cast<int>(tree_.nodes.size()); ++n) {
      if (!sat(0, n)) continue;
      Match m;
      m.root = n;
      bind(0, n, m.bindings);
      m.target = -1;
      for (const auto& [pn, tn] : m.bindings)
        if (pn == p_.capture_node) {
          m.target = tn;
          break;
        }
      out.push_back(std::move(m));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Match& a, const Match& b) { return a.target < b.target; });
    return out;
  }

 private:
  const std::vector<Span>& occurrences(Concept c) {
    auto& slot = occ_[static_cast<int>(c)];
    if (!slot) slot = markers_ ? markers_(c) : std::vector<Span>{};
    return *slot;
  }

  bool yield_has_occurrence(Concept c, int n) {
    Span y = tree_.nodes[n].yield;
    for (Span o : occurrences(c))
      if (o.begin >= y.begin && o.end <= y.end) return true;
    return false;
  }

  bool node_test(int pn, int tn) {
    const PatternNode& node = p_.at(pn);
    switch (node.test) {
      case PatternNode::Test::wildcard: return true;
      case PatternNode::Test::label: return tree_.nodes[tn].label == node.label;
      case PatternNode::Test::marker: return yield_has_occurrence(node.marker, tn);
    }
    return false;
  }

  static bool bare_marker(const TreePattern& p, int pn) {
    const PatternNode& node = p.at(pn);
    return node.test == PatternNode::Test::marker && node.rels.empty() && !node.capture;
  }

  template <typename Fn>
  void for_candidates(PatternNode::Op op, int tn, Fn&& fn) {
    switch (op) {
      case PatternNode::Op::child:
        for (int c : tree_.nodes[tn].children)
          if (fn(c)) return;
        break;
      case PatternNode::Op::descendant:
        for (int d = tn + 1; d < subtree_end_[tn]; ++d)
          if (fn(d)) return;
        break;
      case PatternNode::Op::sister: {
        int parent = tree_.nodes[tn].parent;
        if (parent < 0) break;
        for (int s : tree_.nodes[parent].children)
          if (s != tn && fn(s)) return;
        break;
      }
    }
  }

  bool rel_holds(const PatternNode::Rel& rel, int tn) {
    if (rel.op == PatternNode::Op::descendant && bare_marker(p_, rel.operand))
      return yield_has_occurrence(p_.at(rel.operand).marker, tn);
    bool found = false;
    for_candidates(rel.op, tn, [&](int m) {
      if (sat(rel.operand, m)) {
        found = true;
        return true;
      }
      return false;
    });
    return found;
  }

  bool sat(int pn, int tn) {
    auto& slot = memo_[pn * tree_.nodes.size() + tn];
    if (slot) return slot == 1;
    bool ok = node_test(pn, tn);
    if (ok)
      for (const auto& rel : p_.at(pn).rels) {
        bool holds = rel_holds(rel, tn);
        if (holds == rel.negated) {
          ok = false;
          break;
        }
      }
    slot = ok ? 1 : 2;
    return ok;
  }

  // First document-order witness for every positive relation.
  void bind(int pn, int tn, std::vector<std::pair<int, int>>& out) {
    out.emplace_back(pn, tn);
    for (const auto& rel : p_.at(pn).rels) {
      if (rel.negated) continue;
      if (rel.op == PatternNode::Op::descendant && bare_marker(p_, rel.operand)) continue;
      int witness = -1;
      for_candidates(rel.op, tn, [&](int m) {
        if (sat(rel.operand, m)) {
          witness = m;
          return true;
        }
        return false;
      });
      if (witness >= 0) bind(rel.operand, witness, out);
    }
  }

  const TreePattern& p_;
  const ConstituencyTree& tree_;
  const MarkerOracle& markers_;
  std::vector<int> subtree_end_;
  std::vector<int8_t> memo_;
  std::array<std::optional<std::vector<Span>>, kConceptCount> occ_;
};

}  // namespace detail

/// All matches of a compiled pattern against a tree, ordered by the capture
/// target's position in document order.
inline std::vector<Match> match_pattern(const TreePattern& p, const ConstituencyTree& tree,
                                        const MarkerOracle& markers = {}) {
  return detail::PatternMatcher(p, tree, markers).run();
}

}  // namespace lexmeta
