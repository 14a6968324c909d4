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

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "lexmeta/core.hpp"
#include "lexmeta/error.hpp"

namespace lexmeta {

struct TreeNode {
  std::string label;
  int parent = -1;
  // Ordered content: child nodes and directly attached tokens.
  struct Part {
    bool is_token = false;
    int id = 0;  // token index or node id
  };
  std::vector<Part> parts;
  std::vector<int> children;  // node ids from parts, kept in order
  Span yield;                 // contiguous by construction
};

// Constituency parse over one token sequence. Node 0 is the root and nodes
// are stored in pre-order; leaf tokens appear left to right, so every yield
// is one contiguous half-open range.
struct ConstituencyTree {
  std::vector<TreeNode> nodes;
  std::vector<std::string> words;  // leaf surfaces in token order
  int root = 0;

  int num_tokens() const { return static_cast<int>(words.size()); }
  Span yield_of(int node) const { return nodes[node].yield; }
};

namespace detail {

class BracketParser {
 public:
  explicit BracketParser(std::string_view text) : text_(text) {}

  ConstituencyTree run() {
    skip_ws();
    if (at_end()) fail(Errc::empty_tree, "no content");
    if (peek() != '(') fail(Errc::unbalanced_brackets, "expected '(' at offset " + here());
    parse_node(-1);
    skip_ws();
    if (!at_end()) fail(Errc::unbalanced_brackets, "trailing content at offset " + here());
    return std::move(tree_);
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  std::string here() const { return std::to_string(pos_); }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  std::string read_atom() {
    size_t start = pos_;
    while (!at_end() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != '(' &&
           peek() != ')')
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  int parse_node(int parent) {
    ++pos_;  // consume '('
    skip_ws();
    std::string label = read_atom();
    if (label.empty()) fail(Errc::empty_label, "node without a label at offset " + here());
    int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back({});
    tree_.nodes[id].label = std::move(label);
    tree_.nodes[id].parent = parent;
    int begin = static_cast<int>(tree_.words.size());
    while (true) {
      skip_ws();
      if (at_end()) fail(Errc::unbalanced_brackets, "unclosed node");
      if (peek() == ')') {
        ++pos_;
        break;
      }
      if (peek() == '(') {
        int child = parse_node(id);
        tree_.nodes[id].parts.push_back({false, child});
        tree_.nodes[id].children.push_back(child);
      } else {
        int tok = static_cast<int>(tree_.words.size());
        tree_.words.push_back(read_atom());
        tree_.nodes[id].parts.push_back({true, tok});
      }
    }
    if (tree_.nodes[id].parts.empty())
      fail(Errc::format, "node '" + tree_.nodes[id].label + "' has no children");
    tree_.nodes[id].yield = {begin, static_cast<int>(tree_.words.size())};
    return id;
  }

  std::string_view text_;
  size_t pos_ = 0;
  ConstituencyTree tree_;
};

}  // namespace detail

/// Parse a Penn-style bracketed tree, e.g. "(PP (P Within) (NP (D the) (N limits)))".
inline ConstituencyTree parse_bracketed(std::string_view text) {
  return detail::BracketParser(text).run();
}

inline void to_bracketed_impl(const ConstituencyTree& t, int node, std::string& out) {
  const TreeNode& n = t.nodes[node];
  out += '(';
  out += n.label;
  for (const TreeNode::Part& p : n.parts) {
    out += ' ';
    if (p.is_token)
      out += t.words[p.id];
    else
      to_bracketed_impl(t, p.id, out);
  }
  out += ')';
}

inline std::string to_bracketed(const ConstituencyTree& t) {
  std::string out;
  to_bracketed_impl(t, t.root, out);
  return out;
}

}  // namespace lexmeta
