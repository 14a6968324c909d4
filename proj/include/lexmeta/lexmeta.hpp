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

#include "lexmeta/annotation_io.hpp"
#include "lexmeta/core.hpp"
#include "lexmeta/corpus.hpp"
#include "lexmeta/decide.hpp"
#include "lexmeta/deps.hpp"
#include "lexmeta/engine.hpp"
#include "lexmeta/error.hpp"
#include "lexmeta/evaluate.hpp"
#include "lexmeta/features.hpp"
#include "lexmeta/forest.hpp"
#include "lexmeta/kappa.hpp"
#include "lexmeta/lexicon.hpp"
#include "lexmeta/pattern.hpp"
#include "lexmeta/rules.hpp"
#include "lexmeta/statement.hpp"
#include "lexmeta/tree.hpp"
