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

#ifndef PERSUASION_DP_H_
#define PERSUASION_DP_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "persuasion/curve.h"
#include "persuasion/model.h"

namespace persuasion {

// Backward induction result: a value curve for every node, keyed by path,
// and the split extractor of every designed node.
struct Solution {
  std::map<NodePath, ValueCurve> curves;
  std::map<NodePath, SplitExtractor> extractors;

  const ValueCurve& root() const { return curves.at({}); }
};

Solution SolveCurves(const TrialTree& tree);

enum class Action { kPhi1, kPhi2 };
const char* ActionName(Action a);

// p1 = P(left | theta1), p2 = P(left | theta2).
struct DesignedParams {
  Rational p1;
  Rational p2;
  friend bool operator==(const DesignedParams&, const DesignedParams&) =
      default;
};

struct Strategy {
  std::map<NodePath, DesignedParams> designed;
  std::map<NodePath, Action> leaf_actions;
  Rational prior;
};

// How the sender picks among several optimal splits. kReceiverPessimal takes
// the one that leaves the receiver worst off (downstream choices included).
enum class TieBreak { kCanonical, kReceiverPessimal };

// Forward pass over the solved tree. Designed nodes that the prior cannot
// reach still get parameters, chosen at the belief inherited from their
// nearest reachable ancestor, so the strategy stays usable after the tree's
// parameters are perturbed.
Strategy ExtractStrategy(const TrialTree& tree, const Solution& solution,
                         const Rational& prior,
                         TieBreak tie_break = TieBreak::kCanonical);
Strategy ExtractStrategy(const TrialTree& tree, const Rational& prior,
                         TieBreak tie_break = TieBreak::kCanonical);

struct LeafRow {
  NodePath path;
  Rational mass1;  // joint with theta1
  Rational mass2;  // joint with theta2
  std::optional<Rational> posterior;  // empty at zero-mass leaves
  Action action = Action::kPhi2;
  bool ic_violation = false;
};

struct Evaluation {
  Rational sender_utility;
  Rational receiver_utility;
  std::vector<LeafRow> leaves;  // preorder
  std::vector<NodePath> ic_violations;
};

// kFromStrategy uses the strategy's leaf actions (obedient where absent) and
// flags disobedient ones; kObedient recomputes every action from the
// posterior.
enum class ActionMode { kFromStrategy, kObedient };

// Throws ValidationError if a designed node reached with positive mass has
// no parameters or parameters outside [0,1].
Evaluation EvaluateStrategy(const TrialTree& tree, const Strategy& s,
                            const Rational& prior,
                            ActionMode mode = ActionMode::kFromStrategy);

// Receiver utility under sender-optimal play.
Rational ReceiverValue(const TrialTree& tree, const Solution& solution,
                       const Rational& prior,
                       TieBreak tie_break = TieBreak::kCanonical);
Rational ReceiverValue(const TrialTree& tree, const Rational& prior,
                       TieBreak tie_break = TieBreak::kCanonical);
std::vector<Rational> ReceiverValueSamples(
    const TrialTree& tree, const std::vector<Rational>& priors,
    TieBreak tie_break = TieBreak::kCanonical);

// Machine-readable report: designed parameters keyed by path string, leaf
// table, both utilities as "a/b" strings, IC flags.
nlohmann::json StrategyReport(const Strategy& s, const Evaluation& e);

}  // namespace persuasion

#endif  // PERSUASION_DP_H_
