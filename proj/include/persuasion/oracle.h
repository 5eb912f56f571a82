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

// Brute-force checks that share no code with the curve algebra: an
// exhaustive grid over designed parameters, and a finite enumeration of
// two-phase splits at the efficient interim beliefs.

#ifndef PERSUASION_ORACLE_H_
#define PERSUASION_ORACLE_H_

#include <cstdint>
#include <map>

#include "persuasion/dp.h"
#include "persuasion/model.h"

namespace persuasion {

// Largest number of grid candidates GridSearch will visit.
inline constexpr std::uint64_t kGridBudget = 10'000'000;

struct OracleResult {
  Rational best_value;
  std::map<NodePath, DesignedParams> best_params;
  int grid_resolution = 1;
  int refinement_rounds = 0;
  Rational error_bound;
};

// Visits every parameter vector in {0, 1/G, ..., 1}^(2d) (obedient receiver
// at every leaf), keeps the first best in lexicographic order, then runs R
// rounds of coordinate hill-climbing with steps 1/(G 2^r) and 2/(G 2^r).
// error_bound = 4d / (G 2^R): a total-variation bound of 2 per parameter
// times 2d parameters at the final resolution. best_value is re-evaluated
// with EvaluateStrategy. Throws ValidationError if (G+1)^(2d) exceeds
// kGridBudget.
OracleResult GridSearch(const TrialTree& tree, const Rational& prior, int grid,
                        int refinement_rounds);

// Number of grid candidates GridSearch would visit, saturating at
// kGridBudget + 1.
std::uint64_t GridCandidates(int designed_nodes, int grid);

// Interim beliefs per side restricted to {alpha_low, beta_low, 0, 1, prior};
// every pair whose split reaches the prior is evaluated exactly, including
// sending everything to one side. Parameters are reported for the root.
OracleResult EnumerateTwoPhase(const Experiment& e_a, const Experiment& e_b,
                               const Rational& prior);

}  // namespace persuasion

#endif  // PERSUASION_ORACLE_H_
