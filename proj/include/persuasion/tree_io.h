// Copyright 2026 The Persuasion Authors. All rights reserved.
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

#ifndef PERSUASION_TREE_IO_H_
#define PERSUASION_TREE_IO_H_

#include <string>
#include <string_view>

#include "json.hpp"
#include "persuasion/model.h"

namespace persuasion {

// Parses a tree document. Every error names the offending node path, e.g.
// "probability outside [0,1] at path root". Throws ValidationError.
TrialTree ParseTree(std::string_view document);
TrialTree ParseTreeJson(const nlohmann::json& document);
TrialTree LoadTreeFile(const std::string& filename);

// Same schema back out, rationals as "a/b".
nlohmann::json TreeToJson(const TrialTree& tree);
nlohmann::json NodeToJson(const TreeNode& node);
std::string SerializeTree(const TrialTree& tree);

// "a/b" or decimal literal; ValidationError mentioning `where` otherwise.
Rational ParseRationalField(std::string_view text, const std::string& where);

}  // namespace persuasion

#endif  // PERSUASION_TREE_IO_H_
