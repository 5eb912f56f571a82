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

#ifndef PERSUASION_MODEL_H_
#define PERSUASION_MODEL_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "persuasion/rational.h"

namespace persuasion {

// Binary-outcome test. q1 = P(pass | theta1), q2 = P(pass | theta2).
struct Experiment {
  Rational q1;
  Rational q2;

  Experiment() = default;
  // Throws ValidationError unless both parameters lie in [0,1].
  Experiment(Rational pass_given_theta1, Rational pass_given_theta2);

  // Blackwell non-informative; exact equality, no tolerance.
  bool is_trivial() const { return q1 == q2; }

  Rational PassProbability(const Rational& belief) const;
  Rational FailProbability(const Rational& belief) const;
  // Empty when the outcome has zero probability at this belief.
  std::optional<Rational> PassPosterior(const Rational& belief) const;
  std::optional<Rational> FailPosterior(const Rational& belief) const;

  friend bool operator==(const Experiment&, const Experiment&) = default;
};

// n-outcome test: q1[k] = P(outcome k | theta1), q2[k] = P(outcome k | theta2).
struct NaryExperiment {
  std::vector<Rational> q1;
  std::vector<Rational> q2;

  NaryExperiment() = default;
  // Throws ValidationError on length mismatch, arity < 2, entries outside
  // [0,1], or a distribution not summing to exactly 1.
  NaryExperiment(std::vector<Rational> given_theta1,
                 std::vector<Rational> given_theta2);

  std::size_t arity() const { return q1.size(); }
  bool is_trivial() const { return q1 == q2; }

  friend bool operator==(const NaryExperiment&,
                         const NaryExperiment&) = default;
};

// Outcome indices from the root: 0 = pass/left, 1 = fail/right, k for the
// k-th outcome of an n-ary node.
using NodePath = std::vector<int>;

// "root" for the empty path, otherwise dot-separated indices ("0.1").
std::string PathToString(const NodePath& path);
// Inverse of PathToString; also accepts "". Throws ValidationError.
NodePath ParsePath(std::string_view text);

enum class NodeKind { kLeaf, kDetermined, kDeterminedNary, kDesigned };

const char* NodeKindName(NodeKind kind);

class TreeNode;
using NodePtr = std::shared_ptr<const TreeNode>;

// Immutable trial-tree node. Subtrees are shared between copies.
class TreeNode {
 public:
  static NodePtr Leaf();
  static NodePtr Determined(Experiment experiment, NodePtr pass, NodePtr fail);
  static NodePtr DeterminedNary(NaryExperiment experiment,
                                std::vector<NodePtr> children);
  static NodePtr Designed(NodePtr left, NodePtr right);

  NodeKind kind() const { return kind_; }
  bool is_leaf() const { return kind_ == NodeKind::kLeaf; }
  bool is_designed() const { return kind_ == NodeKind::kDesigned; }
  bool is_determined() const { return kind_ == NodeKind::kDetermined; }
  bool is_determined_nary() const {
    return kind_ == NodeKind::kDeterminedNary;
  }

  // Valid only on kDetermined nodes.
  const Experiment& experiment() const;
  // Valid only on kDeterminedNary nodes.
  const NaryExperiment& nary_experiment() const;

  std::span<const NodePtr> children() const { return children_; }
  const TreeNode& child(std::size_t i) const { return *children_.at(i); }
  const NodePtr& child_ptr(std::size_t i) const { return children_.at(i); }

 private:
  TreeNode(NodeKind kind, std::vector<NodePtr> children);

  NodeKind kind_;
  std::optional<Experiment> experiment_;
  std::optional<NaryExperiment> nary_;
  std::vector<NodePtr> children_;
};

bool StructurallyEqual(const TreeNode& a, const TreeNode& b);

struct TrialTree {
  NodePtr root;
  std::optional<Rational> prior;

  TrialTree() = default;
  // Throws ValidationError if the root is null or the prior is outside [0,1].
  explicit TrialTree(NodePtr root_node,
                     std::optional<Rational> prior_belief = std::nullopt);
};

bool operator==(const TrialTree& a, const TrialTree& b);

// Throws ValidationError if the path leaves the tree.
const TreeNode& Resolve(const TreeNode& root, const NodePath& path);

// Copy of `root` with the node at `path` swapped for `replacement`; untouched
// subtrees are shared.
NodePtr ReplaceAt(const NodePtr& root, const NodePath& path,
                  NodePtr replacement);

// Preorder list of every designed node's path.
std::vector<NodePath> DesignedPaths(const TreeNode& root);
bool ContainsNary(const TreeNode& root);
int Height(const TreeNode& root);

// Which relabelings NormalizeTwoPhase applied. Pass/fail flips refer to the
// experiments as given (before any role swap).
struct SwapRecord {
  bool flip_first = false;
  bool flip_second = false;
  bool swap_roles = false;

  bool empty() const { return !flip_first && !flip_second && !swap_roles; }
  friend bool operator==(const SwapRecord&, const SwapRecord&) = default;
};

struct NormalizedPair {
  Experiment a;
  Experiment b;
  SwapRecord swaps;
};

// Relabels so that a.q1 >= a.q2, b.q1 >= b.q2 and a.q1 >= b.q1.
NormalizedPair NormalizeTwoPhase(const Experiment& ea, const Experiment& eb);

// Replaces every n-ary determined node by at most ceil(log2 n) levels of
// binary determined nodes with identical per-state reach probabilities.
TrialTree ExpandNonbinary(const TrialTree& tree);

// Bottom-up, a trivial determined node with at least one non-trivial
// determined child becomes a revealing (1,0) node over two leaves.
// Throws ValidationError on n-ary nodes.
TrialTree Prune(const TrialTree& tree);

struct EquivalenceReport {
  TrialTree pruned;
  // Every non-trivial determined node has a trivial-determined, designed or
  // leaf sibling.
  bool siblings_ok = false;
  // Every root-to-leaf path of the pruned tree passes a designed node.
  bool designed_on_every_path = false;
  bool verdict = false;
  std::vector<std::string> violations;
};

EquivalenceReport CheckSinglePhaseEquivalence(const TrialTree& tree);

enum class Param { kQ1, kQ2 };

// Copy with one parameter of the determined node at `path` replaced.
// Throws ValidationError if the path does not name a determined node or the
// value is outside [0,1].
TrialTree PerturbParam(const TrialTree& tree, const NodePath& path, Param which,
                       const Rational& value);

}  // namespace persuasion

#endif  // PERSUASION_MODEL_H_
