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

// Receiver-side choice of the second experiment when the sender designs the
// signal in front of it.

#ifndef PERSUASION_RECEIVER_H_
#define PERSUASION_RECEIVER_H_

#include <optional>
#include <utility>
#include <vector>

#include "persuasion/dp.h"
#include "persuasion/model.h"

namespace persuasion {

// Two revealing experiments: whatever the sender does, the state leaks.
std::pair<Experiment, Experiment> FullControlOptimum();

// Strong dominance of y over x for the receiver, checked by two sufficient
// conditions with r(e) = (1 - q1) / (1 - q2) and c = (2 - qY2) / (3 - 2 qY2):
//   (1) qY1 <= c and max(2 qX1 - 1, r(x)) < r(y), or
//   (2) qY1 > c, qX1 < qY1 and r(x) < r(y).
// Throws ValidationError("inferiority test undefined ...") if either q2 is 1
// or either experiment has q1 < q2.
bool IsInferior(const Experiment& x, const Experiment& y);

struct CandidateSet {
  Experiment fixed;
  std::vector<Experiment> candidates;
  Rational lo;  // prior range [lo, hi]
  Rational hi;

  // Throws ValidationError on an empty list, a candidate with q1 < q2, or a
  // range outside 0 <= lo <= hi <= 1.
  void Validate() const;
};

// Order-preserving; drops every candidate inferior to some other candidate
// of the full set. Pairs where the test is undefined are skipped.
std::vector<Experiment> ParetoFilter(const CandidateSet& set);

struct CandidateRow {
  Experiment candidate;
  bool survived_filter = false;
  std::optional<Rational> worst_case;   // empty when filtered out
  std::optional<Rational> worst_prior;  // where the minimum was found
  int evaluations = 0;
};

struct MaximinResult {
  Experiment winner;
  Rational worst_case_utility;
  std::vector<CandidateRow> table;  // one row per input candidate, in order
};

// Beliefs at which MaximinSelect evaluates one candidate: both range ends,
// breakpoints of the sender's optimal curve inside the range, and `grid`
// evenly spaced points. Sorted, duplicates removed.
std::vector<Rational> EvaluationPriors(const ValueCurve& sender_curve,
                                       const Rational& lo, const Rational& hi,
                                       int grid);

// Maximizes the worst receiver utility over the range among the survivors of
// ParetoFilter; ties go to the earliest candidate. Throws ValidationError if
// grid < 2 or nothing survives.
MaximinResult MaximinSelect(const CandidateSet& set, int grid,
                            TieBreak tie_break = TieBreak::kCanonical);

}  // namespace persuasion

#endif  // PERSUASION_RECEIVER_H_
