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

#include <stdexcept>
#include <string>

namespace lexmeta {

enum class Errc {
  // bracketed tree parsing
  unbalanced_brackets,
  empty_label,
  empty_tree,
  // dependency graphs
  multiple_roots,
  no_root,
  cyclic_heads,
  unknown_label,
  // corpus loading
  alignment,
  // pattern compilation
  syntax,
  multiple_captures,
  unknown_relation_operator,
  // lexicon files
  malformed_line,
  unknown_concept_file,
  // rule files
  rule_compilation,
  // feature extraction and learning
  no_main_verb,
  degenerate_dataset,
  schema_mismatch,
  // evaluation
  id_mismatch,
  empty_union,
  // anything structural that has no dedicated code
  format,
  io,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::unbalanced_brackets: return "unbalanced_brackets";
    case Errc::empty_label: return "empty_label";
    case Errc::empty_tree: return "empty_tree";
    case Errc::multiple_roots: return "multiple_roots";
    case Errc::no_root: return "no_root";
    case Errc::cyclic_heads: return "cyclic_heads";
    case Errc::unknown_label: return "unknown_label";
    case Errc::alignment: return "alignment";
    case Errc::syntax: return "syntax";
    case Errc::multiple_captures: return "multiple_captures";
    case Errc::unknown_relation_operator: return "unknown_relation_operator";
    case Errc::malformed_line: return "malformed_line";
    case Errc::unknown_concept_file: return "unknown_concept_file";
    case Errc::rule_compilation: return "rule_compilation";
    case Errc::no_main_verb: return "no_main_verb";
    case Errc::degenerate_dataset: return "degenerate_dataset";
    case Errc::schema_mismatch: return "schema_mismatch";
    case Errc::id_mismatch: return "id_mismatch";
    case Errc::empty_union: return "empty_union";
    case Errc::format: return "format";
    case Errc::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace lexmeta
