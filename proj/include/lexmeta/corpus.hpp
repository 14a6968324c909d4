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

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexmeta/error.hpp"
#include "lexmeta/statement.hpp"

namespace lexmeta {

struct LoadOptions {
  bool strict = true;
  LabelMap labels = LabelMap::standard();
};

namespace detail {

inline Statement statement_from_json(const nlohmann::json& j, const LoadOptions& opts) {
  Statement s;
  if (!j.is_object()) fail(Errc::format, "statement record is not an object");
  if (!j.contains("id") || !j["id"].is_string()) fail(Errc::format, "missing string field 'id'");
  s.id = j["id"].get<std::string>();
  if (!j.contains("text") || !j["text"].is_string())
    fail(Errc::format, s.id + ": missing string field 'text'");
  s.text = j["text"].get<std::string>();
  if (!j.contains("tokens") || !j["tokens"].is_array())
    fail(Errc::format, s.id + ": missing array field 'tokens'");
  int idx = 0;
  for (const auto& tj : j["tokens"]) {
    Token t;
    t.index = idx++;
    if (!tj.contains("surface") || !tj["surface"].is_string())
      fail(Errc::format, s.id + ": token without 'surface'");
    t.surface = tj["surface"].get<std::string>();
    if (tj.contains("lemma") && !tj["lemma"].is_null()) t.lemma = tj["lemma"].get<std::string>();
    if (tj.contains("pos") && !tj["pos"].is_null()) t.pos = tj["pos"].get<std::string>();
    s.tokens.push_back(std::move(t));
  }
  if (!j.contains("tree") || !j["tree"].is_string())
    fail(Errc::format, s.id + ": missing string field 'tree'");
  s.tree = parse_bracketed(j["tree"].get<std::string>());
  if (!j.contains("deps") || !j["deps"].is_array())
    fail(Errc::format, s.id + ": missing array field 'deps'");
  std::vector<DepRow> rows;
  for (const auto& dj : j["deps"]) {
    DepRow r;
    if (!dj.contains("index") || !dj.contains("head") || !dj.contains("label"))
      fail(Errc::format, s.id + ": dependency entry needs index/head/label");
    r.index = dj["index"].get<int>();
    r.head = dj["head"].get<int>();
    r.label = dj["label"].get<std::string>();
    if (r.index != static_cast<int>(rows.size()) + 1)
      fail(Errc::format, s.id + ": dependency indices must run 1..n");
    if (r.index > static_cast<int>(s.tokens.size()))
      fail(Errc::alignment, s.id + ": dependency row beyond token sequence");
    const Token& tok = s.tokens[r.index - 1];
    r.surface = tok.surface;
    r.lemma = tok.lemma;
    r.pos = tok.pos;
    rows.push_back(std::move(r));
  }
  s.deps = build_dependency_graph(rows, opts.labels, opts.strict);
  if (j.contains("references")) {
    if (!j["references"].is_array()) fail(Errc::format, s.id + ": 'references' must be an array");
    for (const auto& rj : j["references"]) {
      if (!rj.is_array() || rj.size() != 2)
        fail(Errc::format, s.id + ": reference spans are [begin,end) pairs");
      s.references.push_back({rj[0].get<int>(), rj[1].get<int>()});
    }
  }
  validate_statement(s);
  return s;
}

}  // namespace detail

/// Load a JSON Lines corpus. Strict mode aborts on the first bad statement;
/// lenient mode skips it and records a warning. Statement order is preserved
/// and ids must be unique.
inline std::vector<Statement> load_corpus(const std::filesystem::path& path,
                                          const LoadOptions& opts = {},
                                          std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open corpus " + path.string());
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };
  std::vector<Statement> out;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      Statement s = detail::statement_from_json(j, opts);
      if (!seen.insert(s.id).second) {
        if (opts.strict) fail(Errc::format, "duplicate statement id '" + s.id + "'");
        warn(path.string() + ":" + std::to_string(lineno) + ": duplicate id '" + s.id +
             "' skipped");
        continue;
      }
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      if (opts.strict)
        fail(Errc::format, path.string() + ":" + std::to_string(lineno) + ": " + e.what());
      warn(path.string() + ":" + std::to_string(lineno) + ": skipped (" + e.what() + ")");
    } catch (const Error& e) {
      if (opts.strict) throw;
      warn(path.string() + ":" + std::to_string(lineno) + ": skipped (" + e.what() + ")");
    }
  }
  if (out.empty()) warn(path.string() + ": corpus is empty");
  return out;
}

}  // namespace lexmeta
