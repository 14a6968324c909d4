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
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lexmeta/core.hpp"
#include "lexmeta/error.hpp"

namespace lexmeta {

// Annotated statements travel as JSON lines:
//   {"id":"s1","statement_type":"permission","annotations":[
//     {"type":"condition","segments":[[0,3]],"rule":"condition-1"}]}
// "rule" and "cannot_classify" are optional; segments are half-open token
// intervals.

inline nlohmann::ordered_json annotated_to_json(const AnnotatedStatement& st) {
  nlohmann::ordered_json j;
  j["id"] = st.id;
  j["statement_type"] = std::string(to_string(st.statement_type));
  auto anns = nlohmann::ordered_json::array();
  for (const Annotation& a : st.annotations) {
    nlohmann::ordered_json ja;
    ja["type"] = std::string(to_string(a.type));
    auto segs = nlohmann::ordered_json::array();
    for (Span s : a.segments) segs.push_back({s.begin, s.end});
    ja["segments"] = std::move(segs);
    if (!a.rule.empty()) ja["rule"] = a.rule;
    if (a.cannot_classify) ja["cannot_classify"] = true;
    anns.push_back(std::move(ja));
  }
  j["annotations"] = std::move(anns);
  return j;
}

inline void write_annotations(std::ostream& out, const std::vector<AnnotatedStatement>& sts) {
  for (const AnnotatedStatement& st : sts) out << annotated_to_json(st).dump() << "\n";
}

inline void write_annotations(const std::filesystem::path& path,
                              const std::vector<AnnotatedStatement>& sts) {
  std::ofstream out(path);
  if (!out) fail(Errc::io, "cannot write " + path.string());
  write_annotations(out, sts);
}

namespace detail {

inline AnnotatedStatement annotated_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) fail(Errc::format, where + ": expected an object");
  if (!j.contains("id") || !j["id"].is_string())
    fail(Errc::format, where + ": missing string field 'id'");
  AnnotatedStatement st;
  st.id = j["id"].get<std::string>();
  if (!j.contains("statement_type") || !j["statement_type"].is_string())
    fail(Errc::format, where + ": missing string field 'statement_type'");
  auto type = concept_from_string(j["statement_type"].get<std::string>());
  if (!type || !is_statement_level(*type))
    fail(Errc::format, where + ": '" + j["statement_type"].get<std::string>() +
                           "' is not a statement type");
  st.statement_type = *type;
  if (!j.contains("annotations") || !j["annotations"].is_array())
    fail(Errc::format, where + ": missing array field 'annotations'");
  for (const auto& ja : j["annotations"]) {
    if (!ja.is_object() || !ja.contains("type") || !ja["type"].is_string())
      fail(Errc::format, where + ": annotation without a type");
    Annotation a;
    auto c = concept_from_string(ja["type"].get<std::string>());
    if (!c) fail(Errc::format, where + ": unknown concept '" + ja["type"].get<std::string>() + "'");
    a.type = *c;
    if (!ja.contains("segments") || !ja["segments"].is_array() || ja["segments"].empty())
      fail(Errc::format, where + ": annotation without segments");
    for (const auto& js : ja["segments"]) {
      if (!js.is_array() || js.size() != 2 || !js[0].is_number_integer() ||
          !js[1].is_number_integer())
        fail(Errc::format, where + ": segment must be [begin, end]");
      Span s{js[0].get<int>(), js[1].get<int>()};
      if (s.begin < 0 || s.end <= s.begin)
        fail(Errc::format, where + ": bad segment [" + std::to_string(s.begin) + ", " +
                               std::to_string(s.end) + ")");
      a.segments.push_back(s);
    }
    a.segments = normalize_segments(std::move(a.segments));
    if (ja.contains("rule")) a.rule = ja["rule"].get<std::string>();
    if (ja.contains("cannot_classify")) a.cannot_classify = ja["cannot_classify"].get<bool>();
    st.annotations.push_back(std::move(a));
  }
  return st;
}

}  // namespace detail

inline std::vector<AnnotatedStatement> read_annotations(std::istream& in,
                                                        const std::string& origin = "annotations") {
  std::vector<AnnotatedStatement> out;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = origin + ":" + std::to_string(lineno);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) fail(Errc::format, where + ": invalid JSON");
    out.push_back(detail::annotated_from_json(j, where));
    if (!seen.insert(out.back().id).second)
      fail(Errc::format, where + ": duplicate statement id '" + out.back().id + "'");
  }
  return out;
}

inline std::vector<AnnotatedStatement> read_annotations(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open " + path.string());
  return read_annotations(in, path.filename().string());
}

}  // namespace lexmeta
