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

#include "persuasion/model.h"

#include <algorithm>
#include <charconv>
#include <utility>

#include "persuasion/errors.h"

namespace persuasion {
namespace {

void RequireProbability(const Rational& r, const char* what) {
  if (!r.in_unit_interval()) {
    throw ValidationError(std::string("probability outside [0,1]: ") + what +
                          " = " + r.ToString());
  }
}

std::optional<Rational> Posterior(const Rational& belief, const Rational& a,
                                  const Rational& b) {
  Rational joint1 = belief * a;
  Rational total = joint1 + (Rational(1) - belief) * b;
  if (total.is_zero()) return std::nullopt;
  return joint1 / total;
}

Rational SumRange(const std::vector<Rational>& v, std::size_t lo,
                  std::size_t hi) {
  Rational s;
  for (std::size_t k = lo; k < hi; ++k) s += v[k];
  return s;
}

Rational ConditionalOrZero(const Rational& part, const Rational& whole) {
  return whole.is_zero() ? Rational(0) : part / whole;
}

// Outcomes [lo, hi) of `e`, reached with per-state masses sum1/sum2 of the
// group. Splits off the largest power-of-two prefix that leaves a non-empty
// remainder, giving ceil(log2(hi - lo)) levels.
NodePtr ExpandGroup(const NaryExperiment& e,
                    const std::vector<NodePtr>& children, std::size_t lo,
                    std::size_t hi) {
  if (hi - lo == 1) return children[lo];
  std::size_t half = 1;
  while (half * 2 < hi - lo) half *= 2;
  std::size_t mid = lo + half;
  Rational all1 = SumRange(e.q1, lo, hi);
  Rational all2 = SumRange(e.q2, lo, hi);
  Experiment split(ConditionalOrZero(SumRange(e.q1, lo, mid), all1),
                   ConditionalOrZero(SumRange(e.q2, lo, mid), all2));
  return TreeNode::Determined(std::move(split),
                              ExpandGroup(e, children, lo, mid),
                              ExpandGroup(e, children, mid, hi));
}

NodePtr ExpandNode(const NodePtr& node) {
  switch (node->kind()) {
    case NodeKind::kLeaf:
      return node;
    case NodeKind::kDetermined:
      return TreeNode::Determined(node->experiment(),
                                  ExpandNode(node->child_ptr(0)),
                                  ExpandNode(node->child_ptr(1)));
    case NodeKind::kDesigned:
      return TreeNode::Designed(ExpandNode(node->child_ptr(0)),
                                ExpandNode(node->child_ptr(1)));
    case NodeKind::kDeterminedNary: {
      std::vector<NodePtr> expanded;
      for (const NodePtr& c : node->children()) expanded.push_back(ExpandNode(c));
      const NaryExperiment& e = node->nary_experiment();
      return ExpandGroup(e, expanded, 0, e.arity());
    }
  }
  return node;
}

bool IsNonTrivialDetermined(const TreeNode& n) {
  return n.is_determined() && !n.experiment().is_trivial();
}

NodePtr PruneNode(const NodePtr& node) {
  switch (node->kind()) {
    case NodeKind::kLeaf:
      return node;
    case NodeKind::kDeterminedNary:
      throw ValidationError(
          "prune requires a binary tree; expand n-ary nodes first");
    case NodeKind::kDesigned:
      return TreeNode::Designed(PruneNode(node->child_ptr(0)),
                                PruneNode(node->child_ptr(1)));
    case NodeKind::kDetermined: {
      NodePtr pass = PruneNode(node->child_ptr(0));
      NodePtr fail = PruneNode(node->child_ptr(1));
      if (node->experiment().is_trivial() &&
          (IsNonTrivialDetermined(*pass) || IsNonTrivialDetermined(*fail))) {
        return TreeNode::Determined(Experiment(1, 0), TreeNode::Leaf(),
                                    TreeNode::Leaf());
      }
      return TreeNode::Determined(node->experiment(), std::move(pass),
                                  std::move(fail));
    }
  }
  return node;
}

bool NeutralSibling(const TreeNode& n) {
  return n.is_leaf() || n.is_designed() ||
         (n.is_determined() && n.experiment().is_trivial());
}

void CheckSiblings(const TreeNode& node, NodePath& path,
                   EquivalenceReport& report) {
  if (path.empty() && IsNonTrivialDetermined(node)) {
    report.violations.push_back(
        "non-trivial determined node at root has no sibling");
  }
  auto kids = node.children();
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (IsNonTrivialDetermined(*kids[i])) {
      for (std::size_t j = 0; j < kids.size(); ++j) {
        if (j != i && !NeutralSibling(*kids[j])) {
          NodePath p = path;
          p.push_back(static_cast<int>(i));
          report.violations.push_back(
              "non-trivial determined node at " + PathToString(p) +
              " has a sibling that is neither trivial nor designed");
          break;
        }
      }
    }
    path.push_back(static_cast<int>(i));
    CheckSiblings(*kids[i], path, report);
    path.pop_back();
  }
}

void CheckDesignedPaths(const TreeNode& node, bool seen, NodePath& path,
                        EquivalenceReport& report) {
  seen = seen || node.is_designed();
  if (node.is_leaf()) {
    if (!seen) {
      report.violations.push_back("path to leaf " + PathToString(path) +
                                  " contains no designed node");
    }
    return;
  }
  auto kids = node.children();
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(static_cast<int>(i));
    CheckDesignedPaths(*kids[i], seen, path, report);
    path.pop_back();
  }
}

void CollectDesigned(const TreeNode& node, NodePath& path,
                     std::vector<NodePath>& out) {
  if (node.is_designed()) out.push_back(path);
  auto kids = node.children();
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(static_cast<int>(i));
    CollectDesigned(*kids[i], path, out);
    path.pop_back();
  }
}

}  // namespace

Experiment::Experiment(Rational pass_given_theta1, Rational pass_given_theta2)
    : q1(std::move(pass_given_theta1)), q2(std::move(pass_given_theta2)) {
  RequireProbability(q1, "q1");
  RequireProbability(q2, "q2");
}

Rational Experiment::PassProbability(const Rational& belief) const {
  return belief * q1 + (Rational(1) - belief) * q2;
}

Rational Experiment::FailProbability(const Rational& belief) const {
  return Rational(1) - PassProbability(belief);
}

std::optional<Rational> Experiment::PassPosterior(
    const Rational& belief) const {
  return Posterior(belief, q1, q2);
}

std::optional<Rational> Experiment::FailPosterior(
    const Rational& belief) const {
  return Posterior(belief, Rational(1) - q1, Rational(1) - q2);
}

NaryExperiment::NaryExperiment(std::vector<Rational> given_theta1,
                               std::vector<Rational> given_theta2)
    : q1(std::move(given_theta1)), q2(std::move(given_theta2)) {
  if (q1.size() != q2.size()) {
    throw ValidationError("n-ary experiment: q1 and q2 lengths differ");
  }
  if (q1.size() < 2) {
    throw ValidationError("n-ary experiment needs at least two outcomes");
  }
  for (const auto* dist : {&q1, &q2}) {
    Rational total;
    for (const Rational& r : *dist) {
      RequireProbability(r, dist == &q1 ? "q1[k]" : "q2[k]");
      total += r;
    }
    if (total != Rational(1)) {
      throw ValidationError("n-ary distribution does not sum to 1 (sum = " +
                            total.ToString() + ")");
    }
  }
}

std::string PathToString(const NodePath& path) {
  if (path.empty()) return "root";
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(path[i]);
  }
  return s;
}

NodePath ParsePath(std::string_view text) {
  NodePath path;
  if (text.empty() || text == "root") return path;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t dot = text.find('.', start);
    std::string_view part = text.substr(
        start, dot == std::string_view::npos ? text.size() - start
                                             : dot - start);
    int index = -1;
    auto [ptr, ec] =
        std::from_chars(part.data(), part.data() + part.size(), index);
    if (part.empty() || ec != std::errc() ||
        ptr != part.data() + part.size() || index < 0) {
      throw ValidationError("invalid node path \"" + std::string(text) + "\"");
    }
    path.push_back(index);
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return path;
}

const char* NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kLeaf:
      return "leaf";
    case NodeKind::kDetermined:
      return "determined";
    case NodeKind::kDeterminedNary:
      return "determined_nary";
    case NodeKind::kDesigned:
      return "designed";
  }
  return "?";
}

TreeNode::TreeNode(NodeKind kind, std::vector<NodePtr> children)
    : kind_(kind), children_(std::move(children)) {
  for (const NodePtr& c : children_) {
    if (!c) throw ValidationError("tree node has a null child");
  }
}

NodePtr TreeNode::Leaf() {
  static const NodePtr leaf(new TreeNode(NodeKind::kLeaf, {}));
  return leaf;
}

NodePtr TreeNode::Determined(Experiment experiment, NodePtr pass,
                             NodePtr fail) {
  auto* node = new TreeNode(NodeKind::kDetermined,
                            {std::move(pass), std::move(fail)});
  node->experiment_ = std::move(experiment);
  return NodePtr(node);
}

NodePtr TreeNode::DeterminedNary(NaryExperiment experiment,
                                 std::vector<NodePtr> children) {
  if (children.size() != experiment.arity()) {
    throw ValidationError("n-ary node has " + std::to_string(children.size()) +
                          " children but arity " +
                          std::to_string(experiment.arity()));
  }
  auto* node = new TreeNode(NodeKind::kDeterminedNary, std::move(children));
  node->nary_ = std::move(experiment);
  return NodePtr(node);
}

NodePtr TreeNode::Designed(NodePtr left, NodePtr right) {
  return NodePtr(
      new TreeNode(NodeKind::kDesigned, {std::move(left), std::move(right)}));
}

const Experiment& TreeNode::experiment() const {
  if (!experiment_) throw ValidationError("not a determined node");
  return *experiment_;
}

const NaryExperiment& TreeNode::nary_experiment() const {
  if (!nary_) throw ValidationError("not an n-ary determined node");
  return *nary_;
}

bool StructurallyEqual(const TreeNode& a, const TreeNode& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  if (a.is_determined() && !(a.experiment() == b.experiment())) return false;
  if (a.is_determined_nary() && !(a.nary_experiment() == b.nary_experiment())) {
    return false;
  }
  if (a.children().size() != b.children().size()) return false;
  for (std::size_t i = 0; i < a.children().size(); ++i) {
    if (!StructurallyEqual(a.child(i), b.child(i))) return false;
  }
  return true;
}

TrialTree::TrialTree(NodePtr root_node, std::optional<Rational> prior_belief)
    : root(std::move(root_node)), prior(std::move(prior_belief)) {
  if (!root) throw ValidationError("trial tree has no root");
  if (prior) RequireProbability(*prior, "prior");
}

bool operator==(const TrialTree& a, const TrialTree& b) {
  return a.prior == b.prior && StructurallyEqual(*a.root, *b.root);
}

const TreeNode& Resolve(const TreeNode& root, const NodePath& path) {
  const TreeNode* node = &root;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] < 0 ||
        static_cast<std::size_t>(path[i]) >= node->children().size()) {
      throw ValidationError("node path " + PathToString(path) +
                            " does not resolve (step " + std::to_string(i) +
                            " at a " + NodeKindName(node->kind()) + " node)");
    }
    node = &node->child(static_cast<std::size_t>(path[i]));
  }
  return *node;
}

NodePtr ReplaceAt(const NodePtr& root, const NodePath& path,
                  NodePtr replacement) {
  if (path.empty()) return replacement;
  Resolve(*root, path);
  std::vector<NodePtr> kids(root->children().begin(), root->children().end());
  auto& slot = kids[static_cast<std::size_t>(path.front())];
  slot = ReplaceAt(slot, NodePath(path.begin() + 1, path.end()),
                   std::move(replacement));
  switch (root->kind()) {
    case NodeKind::kDetermined:
      return TreeNode::Determined(root->experiment(), kids[0], kids[1]);
    case NodeKind::kDeterminedNary:
      return TreeNode::DeterminedNary(root->nary_experiment(), kids);
    case NodeKind::kDesigned:
      return TreeNode::Designed(kids[0], kids[1]);
    case NodeKind::kLeaf:
      break;
  }
  throw ValidationError("cannot descend into a leaf");
}

std::vector<NodePath> DesignedPaths(const TreeNode& root) {
  std::vector<NodePath> out;
  NodePath path;
  CollectDesigned(root, path, out);
  return out;
}

bool ContainsNary(const TreeNode& root) {
  if (root.is_determined_nary()) return true;
  for (const NodePtr& c : root.children()) {
    if (ContainsNary(*c)) return true;
  }
  return false;
}

int Height(const TreeNode& root) {
  int h = 0;
  for (const NodePtr& c : root.children()) h = std::max(h, Height(*c));
  return root.is_leaf() ? 0 : h + 1;
}

NormalizedPair NormalizeTwoPhase(const Experiment& ea, const Experiment& eb) {
  // Relabeling pass as fail maps (q1, q2) to (1 - q1, 1 - q2); merely
  // exchanging q1 and q2 would change the posteriors.
  auto relabel = [](Experiment& e) {
    e = Experiment(Rational(1) - e.q1, Rational(1) - e.q2);
  };
  NormalizedPair out{ea, eb, {}};
  if (out.a.q1 < out.a.q2) {
    relabel(out.a);
    out.swaps.flip_first = true;
  }
  if (out.b.q1 < out.b.q2) {
    relabel(out.b);
    out.swaps.flip_second = true;
  }
  if (out.a.q1 < out.b.q1) {
    std::swap(out.a, out.b);
    out.swaps.swap_roles = true;
  }
  return out;
}

TrialTree ExpandNonbinary(const TrialTree& tree) {
  return TrialTree(ExpandNode(tree.root), tree.prior);
}

TrialTree Prune(const TrialTree& tree) {
  return TrialTree(PruneNode(tree.root), tree.prior);
}

EquivalenceReport CheckSinglePhaseEquivalence(const TrialTree& tree) {
  EquivalenceReport report;
  report.pruned = Prune(tree);
  NodePath path;
  CheckSiblings(*report.pruned.root, path, report);
  report.siblings_ok = report.violations.empty();
  std::size_t before = report.violations.size();
  CheckDesignedPaths(*report.pruned.root, false, path, report);
  report.designed_on_every_path = report.violations.size() == before;
  report.verdict = report.siblings_ok && report.designed_on_every_path;
  return report;
}

TrialTree PerturbParam(const TrialTree& tree, const NodePath& path, Param which,
                       const Rational& value) {
  const TreeNode& target = Resolve(*tree.root, path);
  if (!target.is_determined()) {
    throw ValidationError("node " + PathToString(path) +
                          " is not a determined node");
  }
  if (!value.in_unit_interval()) {
    throw ValidationError("probability outside [0,1]: " + value.ToString());
  }
  Experiment e = target.experiment();
  (which == Param::kQ1 ? e.q1 : e.q2) = value;
  NodePtr replacement = TreeNode::Determined(std::move(e), target.child_ptr(0),
                                             target.child_ptr(1));
  return TrialTree(ReplaceAt(tree.root, path, std::move(replacement)),
                   tree.prior);
}

}  // namespace persuasion
