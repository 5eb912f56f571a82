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

#include "persuasion/receiver.h"

#include <algorithm>

#include "persuasion/errors.h"
#include "persuasion/twophase.h"

namespace persuasion {
namespace {

const Rational kZero(0);
const Rational kOne(1);

Rational FailRatio(const Experiment& e) {
  return (kOne - e.q1) / (kOne - e.q2);
}

}  // namespace

std::pair<Experiment, Experiment> FullControlOptimum() {
  return {Experiment(1, 0), Experiment(1, 0)};
}

bool IsInferior(const Experiment& x, const Experiment& y) {
  for (const Experiment* e : {&x, &y}) {
    if (e->q2 == kOne || e->q1 < e->q2) {
      throw ValidationError(
          "inferiority test undefined: needs q1 >= q2 and q2 < 1, got (" +
          e->q1.ToString() + ", " + e->q2.ToString() + ")");
    }
  }
  Rational c = (Rational(2) - y.q2) / (Rational(3) - Rational(2) * y.q2);
  Rational rx = FailRatio(x);
  Rational ry = FailRatio(y);
  if (y.q1 <= c) {
    return Max(Rational(2) * x.q1 - kOne, rx) < ry;
  }
  return x.q1 < y.q1 && rx < ry;
}

void CandidateSet::Validate() const {
  if (candidates.empty()) throw ValidationError("candidate list is empty");
  for (const Experiment& e : candidates) {
    if (e.q1 < e.q2) {
      throw ValidationError("candidate (" + e.q1.ToString() + ", " +
                            e.q2.ToString() + ") has q1 < q2");
    }
  }
  if (lo.sign() < 0 || hi < lo || kOne < hi) {
    throw ValidationError("prior range must satisfy 0 <= a <= b <= 1");
  }
}

std::vector<Experiment> ParetoFilter(const CandidateSet& set) {
  std::vector<Experiment> out;
  for (std::size_t i = 0; i < set.candidates.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < set.candidates.size() && !dominated; ++j) {
      if (i == j) continue;
      try {
        dominated = IsInferior(set.candidates[i], set.candidates[j]);
      } catch (const ValidationError&) {
        // Undefined comparison: no evidence either way.
      }
    }
    if (!dominated) out.push_back(set.candidates[i]);
  }
  return out;
}

std::vector<Rational> EvaluationPriors(const ValueCurve& sender_curve,
                                       const Rational& lo, const Rational& hi,
                                       int grid) {
  if (grid < 2) throw ValidationError("grid must be at least 2");
  std::vector<Rational> out = {lo, hi};
  for (const Rational& x : sender_curve.breakpoints()) {
    if (lo <= x && x <= hi) out.push_back(x);
  }
  for (int k = 0; k < grid; ++k) {
    out.push_back(lo + (hi - lo) * Rational(k, grid - 1));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

MaximinResult MaximinSelect(const CandidateSet& set, int grid,
                            TieBreak tie_break) {
  set.Validate();
  if (grid < 2) throw ValidationError("grid must be at least 2");
  std::vector<Experiment> survivors = ParetoFilter(set);
  MaximinResult out;
  std::optional<std::size_t> winner_row;
  std::vector<bool> claimed(survivors.size(), false);
  for (const Experiment& e : set.candidates) {
    CandidateRow row;
    row.candidate = e;
    // Match survivors by position so duplicates are all marked.
    for (std::size_t s = 0; s < survivors.size(); ++s) {
      if (!claimed[s] && survivors[s] == e) {
        claimed[s] = true;
        row.survived_filter = true;
        break;
      }
    }
    if (row.survived_filter) {
      TrialTree tree = TwoPhaseTree(set.fixed, e);
      Solution solution = SolveCurves(tree);
      for (const Rational& p :
           EvaluationPriors(solution.root(), set.lo, set.hi, grid)) {
        Rational r = ReceiverValue(tree, solution, p, tie_break);
        ++row.evaluations;
        if (!row.worst_case || r < *row.worst_case) {
          row.worst_case = r;
          row.worst_prior = p;
        }
      }
      if (!winner_row ||
          *out.table[*winner_row].worst_case < *row.worst_case) {
        winner_row = out.table.size();
      }
    }
    out.table.push_back(std::move(row));
  }
  if (!winner_row) throw ValidationError("no candidate survives filtering");
  out.winner = out.table[*winner_row].candidate;
  out.worst_case_utility = *out.table[*winner_row].worst_case;
  return out;
}

}  // namespace persuasion
