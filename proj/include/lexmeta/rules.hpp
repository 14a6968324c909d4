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
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lexmeta/core.hpp"
#include "lexmeta/error.hpp"
#include "lexmeta/pattern.hpp"

namespace lexmeta {

// Rule files, one rule per line:
//
//   phrase <concept> [tag] :: <tree pattern>
//   statement <concept> priority=<n> :: <test> ("|" <test>)*
//
// Phrase tags: "pre-action" marks spans carved out of the verb phrase before
// the action rule runs; "subj", "obj-active" and "obj-passive" are dependency
// guards on actor rules. Statement tests: "annotation:<concept>",
// "marker:<concept>", "modality-with:<concept>".

enum class RuleTag { none, pre_action, subj, obj_active, obj_passive };

struct PhraseRule {
  std::string id;  // "<concept>-<k>", k counting rules of the concept in file order
  Concept concept_id{};
  RuleTag tag = RuleTag::none;
  TreePattern pattern;
  int line = 0;
};

struct StatementTest {
  enum class Kind { annotation, marker, modality_with };
  Kind kind;
  Concept concept_id{};
};

struct StatementRule {
  std::string id;
  Concept concept_id{};
  int priority = 0;
  std::vector<StatementTest> any_of;
  int line = 0;
};

struct RuleSet {
  std::vector<PhraseRule> phrase;        // file order
  std::vector<StatementRule> statement;  // ascending priority
};

namespace detail {

inline std::string_view trim_view(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline StatementTest parse_statement_test(std::string_view word, const std::string& where) {
  auto colon = word.find(':');
  if (colon == std::string_view::npos)
    fail(Errc::rule_compilation, where + ": expected <kind>:<concept>, got '" +
                                     std::string(word) + "'");
  std::string kind(word.substr(0, colon));
  std::string cname(word.substr(colon + 1));
  auto c = concept_from_string(cname);
  if (!c) fail(Errc::rule_compilation, where + ": unknown concept '" + cname + "'");
  StatementTest t;
  t.concept_id = *c;
  if (kind == "annotation")
    t.kind = StatementTest::Kind::annotation;
  else if (kind == "marker")
    t.kind = StatementTest::Kind::marker;
  else if (kind == "modality-with")
    t.kind = StatementTest::Kind::modality_with;
  else
    fail(Errc::rule_compilation, where + ": unknown statement test '" + kind + "'");
  if (t.kind == StatementTest::Kind::modality_with && *c != Concept::permission &&
      *c != Concept::obligation && *c != Concept::prohibition)
    fail(Errc::rule_compilation, where + ": modality-with takes a modal class");
  return t;
}

}  // namespace detail

inline RuleSet parse_rules(std::string_view text, const std::string& origin = "rules") {
  RuleSet rs;
  std::array<int, kConceptCount> counts{};
  int lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string_view raw = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineno;
    std::string_view line = detail::trim_view(raw);
    if (line.empty() || line.front() == '#') continue;

    std::string where = origin + ":" + std::to_string(lineno);
    auto sep = line.find("::");
    if (sep == std::string_view::npos)
      fail(Errc::rule_compilation, where + ": missing '::'");
    auto head_words = detail::split_ws(line.substr(0, sep));
    std::string_view body = detail::trim_view(line.substr(sep + 2));
    if (head_words.empty())
      fail(Errc::rule_compilation, where + ": missing rule kind");
    if (body.empty()) fail(Errc::rule_compilation, where + ": empty rule body");

    if (head_words[0] == "phrase") {
      if (head_words.size() < 2 || head_words.size() > 3)
        fail(Errc::rule_compilation, where + ": expected 'phrase <concept> [tag]'");
      auto c = concept_from_string(head_words[1]);
      if (!c || is_statement_level(*c))
        fail(Errc::rule_compilation,
             where + ": '" + head_words[1] + "' is not a phrase-level concept");
      PhraseRule rule;
      rule.concept_id = *c;
      rule.line = lineno;
      if (head_words.size() == 3) {
        const std::string& tag = head_words[2];
        if (tag == "pre-action")
          rule.tag = RuleTag::pre_action;
        else if (tag == "subj")
          rule.tag = RuleTag::subj;
        else if (tag == "obj-active")
          rule.tag = RuleTag::obj_active;
        else if (tag == "obj-passive")
          rule.tag = RuleTag::obj_passive;
        else
          fail(Errc::rule_compilation, where + ": unknown tag '" + tag + "'");
      }
      if (rule.tag == RuleTag::pre_action && *c == Concept::action)
        fail(Errc::rule_compilation, where + ": the action rule cannot be pre-action");
      try {
        rule.pattern = compile_pattern(body);
      } catch (const Error& e) {
        fail(Errc::rule_compilation, where + ": " + e.what());
      }
      int k = ++counts[static_cast<int>(*c)];
      rule.id = std::string(to_string(*c)) + "-" + std::to_string(k);
      rs.phrase.push_back(std::move(rule));
    } else if (head_words[0] == "statement") {
      if (head_words.size() != 3 || head_words[2].rfind("priority=", 0) != 0)
        fail(Errc::rule_compilation, where + ": expected 'statement <concept> priority=<n>'");
      auto c = concept_from_string(head_words[1]);
      if (!c || !is_statement_level(*c))
        fail(Errc::rule_compilation,
             where + ": '" + head_words[1] + "' is not a statement-level concept");
      StatementRule rule;
      rule.concept_id = *c;
      rule.line = lineno;
      std::string prio = head_words[2].substr(9);
      if (prio.empty() || prio.find_first_not_of("0123456789") != std::string::npos)
        fail(Errc::rule_compilation, where + ": bad priority '" + prio + "'");
      rule.priority = std::stoi(prio);
      if (rule.priority < 1) fail(Errc::rule_compilation, where + ": priority must be >= 1");
      rule.id = std::string(to_string(*c));

      std::string body_str(body);
      size_t start = 0;
      while (start <= body_str.size()) {
        size_t bar = body_str.find('|', start);
        std::string_view alt(body_str.data() + start,
                             (bar == std::string::npos ? body_str.size() : bar) - start);
        alt = detail::trim_view(alt);
        if (alt.empty()) fail(Errc::rule_compilation, where + ": empty alternative");
        rule.any_of.push_back(detail::parse_statement_test(alt, where));
        if (bar == std::string::npos) break;
        start = bar + 1;
      }
      rs.statement.push_back(std::move(rule));
    } else {
      fail(Errc::rule_compilation,
           where + ": unknown rule kind '" + head_words[0] + "'");
    }
  }

  std::stable_sort(rs.statement.begin(), rs.statement.end(),
                   [](const StatementRule& a, const StatementRule& b) {
                     return a.priority < b.priority;
                   });
  for (size_t i = 1; i < rs.statement.size(); ++i)
    if (rs.statement[i].priority == rs.statement[i - 1].priority)
      fail(Errc::rule_compilation, origin + ": duplicate statement priority " +
                                       std::to_string(rs.statement[i].priority));
  return rs;
}

inline RuleSet load_rules(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open rule file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rules(buf.str(), path.filename().string());
}

}  // namespace lexmeta
