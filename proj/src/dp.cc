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

#include "persuasion/dp.h"

#include <utility>

#include "persuasion/errors.h"

namespace persuasion {
namespace {

const Rational kZero(0);
const Rational kOne(1);
const Rational kHalf(1, 2);

// Outcome k of a determined node as (P(k | theta1), P(k | theta2)).
std::vector<std::pair<Rational, Rational>> Outcomes(const TreeNode& node) {
  std::vector<std::pair<Rational, Rational>> out;
  if (node.is_determined()) {
    const Experiment& e = node.experiment();
    out.emplace_back(e.q1, e.q2);
    out.emplace_back(kOne - e.q1, kOne - e.q2);
  } else {
    const NaryExperiment& e = node.nary_experiment();
    for (std::size_t k = 0; k < e.arity(); ++k) {
      out.emplace_back(e.q1[k], e.q2[k]);
    }
  }
  return out;
}

const ValueCurve& Solve(const TreeNode& node, NodePath& path,
                        Solution& out) {
  std::vector<const ValueCurve*> kids;
  for (std::size_t i = 0; i < node.children().size(); ++i) {
    path.push_back(static_cast<int>(i));
    kids.push_back(&Solve(node.child(i), path, out));
    path.pop_back();
  }
  ValueCurve curve;
  switch (node.kind()) {
    case NodeKind::kLeaf:
      curve = LeafCurve();
      break;
    case NodeKind::kDetermined:
      curve = DeterminedTransform(node.experiment(), *kids[0], *kids[1]);
      break;
    case NodeKind::kDeterminedNary: {
      std::vector<ValueCurve> copies;
      for (const ValueCurve* c : kids) copies.push_back(*c);
      curve = DeterminedTransformNary(node.nary_experiment(), copies);
      break;
    }
    case NodeKind::kDesigned: {
      CombineResult combined = DesignedCombine(*kids[0], *kids[1]);
      curve = combined.curve;
      out.extractors.emplace(path, std::move(combined.extractor));
      break;
    }
  }
  return out.curves.insert_or_assign(path, std::move(curve)).first->second;
}

class Walker {
 public:
  Walker(const Solution& solution, TieBreak tie_break)
      : solution_(solution), tie_break_(tie_break) {}

  // Receiver's expected utility from this node on, given interim belief w.
  Rational ReceiverFrom(const TreeNode& node, NodePath& path,
                        const Rational& w) const {
    switch (node.kind()) {
      case NodeKind::kLeaf:
        return w >= kHalf ? w : kOne - w;
      case NodeKind::kDetermined:
      case NodeKind::kDeterminedNary: {
        Rational total;
        auto outcomes = Outcomes(node);
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
          const auto& [a, b] = outcomes[k];
          Rational mass = w * a + (kOne - w) * b;
          if (mass.is_zero()) continue;
          path.push_back(static_cast<int>(k));
          total += mass * ReceiverFrom(node.child(k), path, w * a / mass);
          path.pop_back();
        }
        return total;
      }
      case NodeKind::kDesigned:
        return Pick(node, path, w).second;
    }
    return kZero;
  }

  // Split chosen at a designed node, with the receiver's utility under it.
  std::pair<SplitChoice, Rational> Pick(const TreeNode& node, NodePath& path,
                                        const Rational& w) const {
    const SplitExtractor& ex = solution_.extractors.at(path);
    std::vector<SplitChoice> options;
    if (tie_break_ == TieBreak::kCanonical) {
      options.push_back(ex.Choose(w));
    } else {
      options = ex.OptimalSplits(w);
    }
    std::optional<std::pair<SplitChoice, Rational>> best;
    for (SplitChoice& s : options) {
      Rational r = SplitReceiver(node, path, s);
      if (!best || r < best->second) best.emplace(std::move(s), std::move(r));
    }
    return *best;
  }

  void Extract(const TreeNode& node, NodePath& path, const Rational& m1,
               const Rational& m2, const Rational& nominal,
               Strategy& out) const {
    Rational mass = m1 + m2;
    Rational w = mass.is_zero() ? nominal : m1 / mass;
    switch (node.kind()) {
      case NodeKind::kLeaf:
        out.leaf_actions[path] =
            (!mass.is_zero() && m1 >= m2) ? Action::kPhi1 : Action::kPhi2;
        return;
      case NodeKind::kDetermined:
      case NodeKind::kDeterminedNary: {
        auto outcomes = Outcomes(node);
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
          const auto& [a, b] = outcomes[k];
          Rational reach = w * a + (kOne - w) * b;
          Rational next = reach.is_zero() ? w : w * a / reach;
          path.push_back(static_cast<int>(k));
          Extract(node.child(k), path, m1 * a, m2 * b, next, out);
          path.pop_back();
        }
        return;
      }
      case NodeKind::kDesigned: {
        SplitChoice s = Pick(node, path, w).first;
        DesignedParams params;
        if (w.is_zero() || w == kOne) {
          params = {s.y, s.y};
        } else {
          params = {s.y * s.u / w, s.y * (kOne - s.u) / (kOne - w)};
        }
        path.push_back(0);
        Extract(node.child(0), path, m1 * params.p1, m2 * params.p2, s.u, out);
        path.back() = 1;
        Extract(node.child(1), path, m1 * (kOne - params.p1),
                m2 * (kOne - params.p2), s.v, out);
        path.pop_back();
        out.designed[path] = std::move(params);
        return;
      }
    }
  }

 private:
  Rational SplitReceiver(const TreeNode& node, NodePath& path,
                         const SplitChoice& s) const {
    Rational r;
    path.push_back(0);
    if (s.y.sign() > 0) r += s.y * ReceiverFrom(node.child(0), path, s.u);
    path.back() = 1;
    if (s.y < kOne) {
      r += (kOne - s.y) * ReceiverFrom(node.child(1), path, s.v);
    }
    path.pop_back();
    return r;
  }

  const Solution& solution_;
  TieBreak tie_break_;
};

void Evaluate(const TreeNode& node, NodePath& path, const Rational& m1,
              const Rational& m2, const Strategy& s, ActionMode mode,
              Evaluation& out) {
  switch (node.kind()) {
    case NodeKind::kLeaf: {
      LeafRow row{path, m1, m2, std::nullopt, Action::kPhi2, false};
      Rational mass = m1 + m2;
      Action obedient = Action::kPhi2;
      if (!mass.is_zero()) {
        row.posterior = m1 / mass;
        if (m1 >= m2) obedient = Action::kPhi1;
      }
      row.action = obedient;
      if (mode == ActionMode::kFromStrategy) {
        if (auto it = s.leaf_actions.find(path); it != s.leaf_actions.end()) {
          row.action = it->second;
        }
      }
      if (!mass.is_zero() && row.action != obedient) {
        row.ic_violation = true;
        out.ic_violations.push_back(path);
      }
      if (row.action == Action::kPhi1) {
        out.sender_utility += mass;
        out.receiver_utility += m1;
      } else {
        out.receiver_utility += m2;
      }
      out.leaves.push_back(std::move(row));
      return;
    }
    case NodeKind::kDetermined:
    case NodeKind::kDeterminedNary: {
      auto outcomes = Outcomes(node);
      for (std::size_t k = 0; k < outcomes.size(); ++k) {
        path.push_back(static_cast<int>(k));
        Evaluate(node.child(k), path, m1 * outcomes[k].first,
                 m2 * outcomes[k].second, s, mode, out);
        path.pop_back();
      }
      return;
    }
    case NodeKind::kDesigned: {
      DesignedParams params{kZero, kZero};
      auto it = s.designed.find(path);
      if (it != s.designed.end()) {
        params = it->second;
        if (!params.p1.in_unit_interval() || !params.p2.in_unit_interval()) {
          throw ValidationError("designed parameter outside [0,1] at path " +
                                PathToString(path));
        }
      } else if (!(m1 + m2).is_zero()) {
        throw ValidationError("missing designed parameter at path " +
                              PathToString(path));
      }
      path.push_back(0);
      Evaluate(node.child(0), path, m1 * params.p1, m2 * params.p2, s, mode,
               out);
      path.back() = 1;
      Evaluate(node.child(1), path, m1 * (kOne - params.p1),
               m2 * (kOne - params.p2), s, mode, out);
      path.pop_back();
      return;
    }
  }
}

}  // namespace

Solution SolveCurves(const TrialTree& tree) {
  Solution out;
  NodePath path;
  Solve(*tree.root, path, out);
  return out;
}

const char* ActionName(Action a) { return a == Action::kPhi1 ? "phi1" : "phi2"; }

Strategy ExtractStrategy(const TrialTree& tree, const Solution& solution,
                         const Rational& prior, TieBreak tie_break) {
  if (!prior.in_unit_interval()) {
    throw ValidationError("prior outside [0,1]: " + prior.ToString());
  }
  Strategy out;
  out.prior = prior;
  NodePath path;
  Walker(solution, tie_break)
      .Extract(*tree.root, path, prior, kOne - prior, prior, out);
  return out;
}

Strategy ExtractStrategy(const TrialTree& tree, const Rational& prior,
                         TieBreak tie_break) {
  return ExtractStrategy(tree, SolveCurves(tree), prior, tie_break);
}

Evaluation EvaluateStrategy(const TrialTree& tree, const Strategy& s,
                            const Rational& prior, ActionMode mode) {
  if (!prior.in_unit_interval()) {
    throw ValidationError("prior outside [0,1]: " + prior.ToString());
  }
  Evaluation out;
  NodePath path;
  Evaluate(*tree.root, path, prior, kOne - prior, s, mode, out);
  return out;
}

Rational ReceiverValue(const TrialTree& tree, const Solution& solution,
                       const Rational& prior, TieBreak tie_break) {
  Strategy s = ExtractStrategy(tree, solution, prior, tie_break);
  return EvaluateStrategy(tree, s, prior).receiver_utility;
}

Rational ReceiverValue(const TrialTree& tree, const Rational& prior,
                       TieBreak tie_break) {
  return ReceiverValue(tree, SolveCurves(tree), prior, tie_break);
}

std::vector<Rational> ReceiverValueSamples(const TrialTree& tree,
                                           const std::vector<Rational>& priors,
                                           TieBreak tie_break) {
  Solution solution = SolveCurves(tree);
  std::vector<Rational> out;
  for (const Rational& p : priors) {
    out.push_back(ReceiverValue(tree, solution, p, tie_break));
  }
  return out;
}

nlohmann::json StrategyReport(const Strategy& s, const Evaluation& e) {
  using nlohmann::json;
  json designed = json::object();
  for (const auto& [path, params] : s.designed) {
    designed[PathToString(path)] = {{"p1", params.p1.ToString()},
                                    {"p2", params.p2.ToString()}};
  }
  json leaves = json::array();
  for (const LeafRow& row : e.leaves) {
    leaves.push_back(
        {{"path", PathToString(row.path)},
         {"mass_theta1", row.mass1.ToString()},
         {"mass_theta2", row.mass2.ToString()},
         {"posterior", row.posterior ? json(row.posterior->ToString())
                                     : json(nullptr)},
         {"action", ActionName(row.action)},
         {"ic_violation", row.ic_violation}});
  }
  json violations = json::array();
  for (const NodePath& p : e.ic_violations) {
    violations.push_back(PathToString(p));
  }
  return {{"prior", s.prior.ToString()},
          {"designed", std::move(designed)},
          {"leaves", std::move(leaves)},
          {"sender_utility", e.sender_utility.ToString()},
          {"sender_utility_decimal", e.sender_utility.ToDecimal()},
          {"receiver_utility", e.receiver_utility.ToString()},
          {"receiver_utility_decimal", e.receiver_utility.ToDecimal()},
          {"ic_violations", std::move(violations)}};
}

}  // namespace persuasion
