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

#ifndef PERSUASION_ERRORS_H_
#define PERSUASION_ERRORS_H_

#include <stdexcept>
#include <string>

namespace persuasion {

// Bad input: malformed documents, out-of-range probabilities, bad paths,
// exceeded search budgets. The CLI maps these to exit status 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what)
      : std::runtime_error(what) {}
};

// An internal cross-check disagreed (e.g. oracle dominance). Exit status 3.
class ConsistencyError : public std::runtime_error {
 public:
  explicit ConsistencyError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace persuasion

#endif  // PERSUASION_ERRORS_H_
