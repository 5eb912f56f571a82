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

#include "persuasion/twophase.h"

#include <utility>
#include <vector>

#include "persuasion/errors.h"

namespace persuasion {
namespace {

const Rational kZero(0);
const Rational kOne(1);
const Rational kHalf(1, 2);

Rational RatioOrHalf(const Rational& num, const Rational& den) {
  return den.is_zero() ? kHalf : num / den;
}

void RequireNormalized(const Experiment& e_a, const Experiment& e_b) {
  if (!IsNormalized(e_a, e_b)) {
    throw ValidationError(
        "two-phase analysis needs q1 >= q2 on both experiments and "
        "qA1 >= qB1; normalize first");
  }
}

ValueCurve MaxOf(const std::vector<ValueCurve>& curves) {
  ValueCurve acc = curves.front();
  for (std::size_t i = 1; i < curves.size(); ++i) {
    acc = PointwiseMax(acc, curves[i]);
  }
  return acc;
}

}  // namespace

const char* PatternName(Pattern p) {
  switch (p) {
    case Pattern::kAlpha:
      return "alpha";
    case Pattern::kBeta:
      return "beta";
    case Pattern::kGamma:
      return "gamma";
  }
  return "?";
}

std::string TypeName(const StrategyType& t) {
  return std::string("(") + PatternName(t.a) + "_A," + PatternName(t.b) + "_B)";
}

std::array<StrategyType, 9> AllTypes() {
  std::array<StrategyType, 9> out;
  const Pattern all[] = {Pattern::kAlpha, Pattern::kBeta, Pattern::kGamma};
  std::size_t i = 0;
  for (Pattern a : all) {
    for (Pattern b : all) out[i++] = {a, b};
  }
  return out;
}

PersuasionPotential ComputePersuasionPotential(const Experiment& e) {
  PersuasionPotential out{Rational(2) * e.q1, std::nullopt};
  if (e.q2 != kOne) out.beta_pot = kOne + (kOne - e.q1) / (kOne - e.q2);
  return out;
}

Thresholds ComputeThresholds(const Experiment& e) {
  return {RatioOrHalf(e.q2, e.q1 + e.q2),
          RatioOrHalf(kOne - e.q2, Rational(2) - e.q1 - e.q2)};
}

bool IcRequirement(const InducedStrategy& ind, const Experiment& e_a,
                   const Experiment& e_b, const Rational& p,
                   const Rational& p1, const Rational& p2) {
  if (p.sign() <= 0 || !(p < kOne)) {
    throw ValidationError("IC requirement needs a prior strictly inside (0,1)");
  }
  // Mass of each state routed to this side's experiment.
  const bool a = ind.side == Side::kA;
  const Experiment& e = a ? e_a : e_b;
  Rational x1 = a ? p1 : kOne - p1;
  Rational x2 = a ? p2 : kOne - p2;
  // pass rows: p x1 q1 vs (1-p) x2 q2; beta uses the fail probabilities.
  Rational lhs, rhs;
  if (ind.kind == Pattern::kBeta) {
    lhs = p * x1 * (kOne - e.q1);
    rhs = (kOne - p) * x2 * (kOne - e.q2);
  } else {
    lhs = p * x1 * e.q1;
    rhs = (kOne - p) * x2 * e.q2;
  }
  return ind.kind == Pattern::kGamma ? lhs <= rhs : lhs >= rhs;
}

PatternDomain PatternOn(Pattern k, const Experiment& e) {
  Thresholds t = ComputeThresholds(e);
  switch (k) {
    case Pattern::kAlpha:
      // Pass posterior >= 1/2 needs w >= alpha_low; fail posterior <= 1/2
      // needs w <= beta_low. Value is the pass probability.
      return {t.alpha_low, t.beta_low, {e.q1 - e.q2, e.q2}};
    case Pattern::kBeta:
      return {t.beta_low, kOne, {kZero, kOne}};
    case Pattern::kGamma:
      return {kZero, t.alpha_low, {kZero, kZero}};
  }
  throw ValidationError("unknown pattern");
}

ValueCurve TypeCurve(const StrategyType& t, const Experiment& e_a,
                     const Experiment& e_b) {
  RequireNormalized(e_a, e_b);
  PatternDomain da = PatternOn(t.a, e_a);
  PatternDomain db = PatternOn(t.b, e_b);
  // Each side's value is linear on its domain, so a best split puts each
  // interim belief at a domain end or at the prior itself.
  std::vector<Piece> pieces = {{da.lo, da.hi, da.value, true},
                               {db.lo, db.hi, db.value, true}};
  for (const Rational& u : {da.lo, da.hi}) {
    for (const Rational& v : {db.lo, db.hi}) {
      if (u == v) continue;
      Rational fu = da.value.At(u);
      Rational fv = db.value.At(v);
      Rational slope = (fu - fv) / (u - v);
      pieces.push_back({Min(u, v), Max(u, v), {slope, fu - slope * u}, true});
    }
  }
  return UpperEnvelope(pieces);
}

ValueCurve OneSidedTypeCurve(Pattern k, const Experiment& e) {
  Thresholds t = ComputeThresholds(e);
  switch (k) {
    case Pattern::kGamma:
      return ValueCurve::Constant(kZero);
    case Pattern::kBeta:
      // p / beta_low up to beta_low (slope = beta potential), then 1.
      if (t.beta_low == kOne) {
        return ValueCurve::Polyline({{kZero, kZero}, {kOne, kOne}});
      }
      return ValueCurve::Polyline({{kZero, kZero}, {t.beta_low, kOne},
                                   {kOne, kOne}});
    case Pattern::kAlpha: {
      // 2 q1 p below alpha_low, the pass probability up to beta_low, and no
      // obedient split beyond it.
      Line pass{e.q1 - e.q2, e.q2};
      std::vector<Rational> xs = {kZero};
      std::vector<Line> segs;
      std::vector<Rational> vals = {kZero};
      if (t.alpha_low.sign() > 0) {
        xs.push_back(t.alpha_low);
        segs.push_back({Rational(2) * e.q1, kZero});
        vals.push_back(pass.At(t.alpha_low));
      }
      if (t.beta_low == kOne) {
        segs.push_back(pass);
        xs.push_back(kOne);
        vals.push_back(pass.At(kOne));
      } else {
        if (t.alpha_low < t.beta_low) {
          segs.push_back(pass);
          xs.push_back(t.beta_low);
          vals.push_back(pass.At(t.beta_low));
        }
        segs.push_back({kZero, kZero});
        xs.push_back(kOne);
        vals.push_back(kZero);
      }
      return ValueCurve(std::move(xs), std::move(segs), std::move(vals));
    }
  }
  throw ValidationError("unknown pattern");
}

bool IsNormalized(const Experiment& e_a, const Experiment& e_b) {
  return e_a.q1 >= e_a.q2 && e_b.q1 >= e_b.q2 && e_a.q1 >= e_b.q1;
}

ValueCurve OptimalTwoPhase(const Experiment& e_a, const Experiment& e_b) {
  NormalizedPair n = NormalizeTwoPhase(e_a, e_b);
  std::vector<ValueCurve> curves;
  for (const StrategyType& t : AllTypes()) {
    curves.push_back(TypeCurve(t, n.a, n.b));
  }
  return MaxOf(curves);
}

ValueCurve BbpOptimal(const Experiment& e_a, const Experiment& e_b) {
  NormalizedPair n = NormalizeTwoPhase(e_a, e_b);
  const StrategyType bbp[] = {{Pattern::kAlpha, Pattern::kGamma},
                              {Pattern::kBeta, Pattern::kGamma},
                              {Pattern::kGamma, Pattern::kAlpha},
                              {Pattern::kGamma, Pattern::kBeta}};
  std::vector<ValueCurve> curves;
  for (const StrategyType& t : bbp) curves.push_back(TypeCurve(t, n.a, n.b));
  return MaxOf(curves);
}

TrialTree TwoPhaseTree(const Experiment& e_a, const Experiment& e_b,
                       std::optional<Rational> prior) {
  NodePtr leaf = TreeNode::Leaf();
  return TrialTree(
      TreeNode::Designed(TreeNode::Determined(e_a, leaf, leaf),
                         TreeNode::Determined(e_b, leaf, leaf)),
      std::move(prior));
}

}  // namespace persuasion
