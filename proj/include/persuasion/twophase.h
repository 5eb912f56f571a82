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

#ifndef PERSUASION_TWOPHASE_H_
#define PERSUASION_TWOPHASE_H_

#include <array>
#include <optional>
#include <string>

#include "persuasion/curve.h"
#include "persuasion/model.h"

namespace persuasion {

// What the sender recommends after a phase-two experiment: phi1 only on pass
// (alpha), always (beta) or never (gamma).
enum class Pattern { kAlpha, kBeta, kGamma };
enum class Side { kA, kB };

const char* PatternName(Pattern p);  // "alpha", "beta", "gamma"

struct InducedStrategy {
  Pattern kind;
  Side side;
};

struct StrategyType {
  Pattern a;
  Pattern b;
  friend bool operator==(const StrategyType&, const StrategyType&) = default;
};

std::string TypeName(const StrategyType& t);  // e.g. "(alpha_A,gamma_B)"

// All nine types, A-pattern major in alpha, beta, gamma order.
std::array<StrategyType, 9> AllTypes();

struct PersuasionPotential {
  Rational alpha_pot;                // 2 q1
  std::optional<Rational> beta_pot;  // 1 + (1-q1)/(1-q2); empty when q2 = 1
};

PersuasionPotential ComputePersuasionPotential(const Experiment& e);

// alpha_low: interim belief at which the pass posterior is exactly 1/2.
// beta_low: interim belief at which the fail posterior is exactly 1/2.
// For the degenerate experiments (0,0) and (1,1) the undefined ratio is taken
// to be 1/2, as for any trivial experiment.
struct Thresholds {
  Rational alpha_low;
  Rational beta_low;
};

Thresholds ComputeThresholds(const Experiment& e);

// One row of the sender-commitment IC table, with p1 = P(signal A | theta1)
// and p2 = P(signal A | theta2). Evaluated in cross-multiplied form so that
// q1 = 0 or q1 = 1 needs no special case. Throws ValidationError unless
// 0 < p < 1.
bool IcRequirement(const InducedStrategy& ind, const Experiment& e_a,
                   const Experiment& e_b, const Rational& p,
                   const Rational& p1, const Rational& p2);

// Where pattern `k` is obedient at both leaves of `e`, as an interval of
// interim beliefs, with its value there (linear in the belief).
struct PatternDomain {
  Rational lo;
  Rational hi;
  Line value;
};

PatternDomain PatternOn(Pattern k, const Experiment& e);

// Best sender value using pattern t.a behind e_a and t.b behind e_b, over
// all obedient splits (either side may get all the mass); 0 where no split
// is obedient. Requires normalized experiments (ValidationError otherwise).
ValueCurve TypeCurve(const StrategyType& t, const Experiment& e_a,
                     const Experiment& e_b);

// Closed forms for the one-sided types (one side gamma), built segment by
// segment rather than through the envelope; used as a cross-check.
ValueCurve OneSidedTypeCurve(Pattern k, const Experiment& e);

// Pointwise max over the nine type curves. Accepts any experiments and
// normalizes first.
ValueCurve OptimalTwoPhase(const Experiment& e_a, const Experiment& e_b);

// Pointwise max over (alpha,gamma), (beta,gamma), (gamma,alpha),
// (gamma,beta). Normalizes first.
ValueCurve BbpOptimal(const Experiment& e_a, const Experiment& e_b);

// Designed root over determined e_a and e_b, each over two leaves.
TrialTree TwoPhaseTree(const Experiment& e_a, const Experiment& e_b,
                       std::optional<Rational> prior = std::nullopt);

bool IsNormalized(const Experiment& e_a, const Experiment& e_b);

}  // namespace persuasion

#endif  // PERSUASION_TWOPHASE_H_
