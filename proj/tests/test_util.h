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

// Seeded generators shared by the unit tests and the acceptance binary.

#ifndef PERSUASION_TESTS_TEST_UTIL_H_
#define PERSUASION_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "persuasion/curve.h"
#include "persuasion/model.h"
#include "persuasion/rational.h"

namespace persuasion::testing {

inline Rational Q(const char* text) { return Rational::Parse(text); }

class Random {
 public:
  explicit Random(std::uint32_t seed) : gen_(seed) {}

  int Int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }
  bool Coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }

  // k/den with den in [1, max_den].
  Rational Unit(int max_den = 12) {
    int den = Int(1, max_den);
    return Rational(Int(0, den), den);
  }
  Rational OpenUnit(int max_den = 12) {
    int den = Int(2, max_den);
    return Rational(Int(1, den - 1), den);
  }
  Experiment NonTrivial(int max_den = 12) {
    for (;;) {
      Experiment e(Unit(max_den), Unit(max_den));
      if (!e.is_trivial()) return e;
    }
  }
  // q1 > q2, as the two-phase analysis assumes after normalization.
  Experiment Informative(int max_den = 12) {
    Experiment e = NonTrivial(max_den);
    if (e.q1 < e.q2) std::swap(e.q1, e.q2);
    return e;
  }
  Experiment Any(int max_den = 12) {
    return Experiment(Unit(max_den), Unit(max_den));
  }

  // Random binary tree with at most `designed_budget` designed nodes.
  NodePtr Node(int depth, int& designed_budget, int max_den = 10) {
    if (depth == 0 || Coin(0.25)) return TreeNode::Leaf();
    if (designed_budget > 0 && Coin(0.45)) {
      --designed_budget;
      NodePtr l = Node(depth - 1, designed_budget, max_den);
      NodePtr r = Node(depth - 1, designed_budget, max_den);
      return TreeNode::Designed(l, r);
    }
    Experiment e = Any(max_den);
    NodePtr pass = Node(depth - 1, designed_budget, max_den);
    NodePtr fail = Node(depth - 1, designed_budget, max_den);
    return TreeNode::Determined(e, pass, fail);
  }
  TrialTree Tree(int depth, int designed_max) {
    int budget = designed_max;
    return TrialTree(Node(depth, budget));
  }

  // Outcome distributions with weights drawn from 0..6 per outcome.
  NaryExperiment Nary(int n) {
    auto draw = [&] {
      std::vector<int> w(n);
      int total = 0;
      for (int& x : w) total += (x = Int(0, 6));
      if (total == 0) w[Int(0, n - 1)] = total = 1;
      std::vector<Rational> q;
      for (int x : w) q.push_back(Rational(x, total));
      return q;
    };
    std::vector<Rational> q1 = draw();
    return NaryExperiment(std::move(q1), draw());
  }

  // Priors 0, 1/(n-1), ..., 1.
  static std::vector<Rational> Grid(int n) {
    std::vector<Rational> out;
    for (int k = 0; k < n; ++k) out.push_back(Rational(k, n - 1));
    return out;
  }

  std::mt19937& engine() { return gen_; }

 private:
  std::mt19937 gen_;
};

// min(2p, 1), written out directly.
inline Rational SinglePhaseValue(const Rational& p) {
  return Min(Rational(2) * p, Rational(1));
}

// Brute-force constrained two-point split: the best
// y * left(u) + (1 - y) * right(v) with y u + (1 - y) v = p, searched over
// the breakpoints of both curves and p itself. Exact for upper
// semicontinuous piecewise-linear curves, since the objective is monotone
// in each split point between consecutive breakpoints.
inline Rational BruteForceSplit(const ValueCurve& left,
                                const ValueCurve& right, const Rational& p) {
  std::vector<Rational> points = left.breakpoints();
  points.insert(points.end(), right.breakpoints().begin(),
                right.breakpoints().end());
  points.push_back(p);
  Rational best = Max(left.Eval(p), right.Eval(p));
  for (const Rational& u : points) {
    for (const Rational& v : points) {
      if (u == v) continue;
      bool brackets = (u <= p && p <= v) || (v <= p && p <= u);
      if (!brackets) continue;
      Rational y = (p - v) / (u - v);
      Rational value = y * left.Eval(u) + (Rational(1) - y) * right.Eval(v);
      if (best < value) best = value;
    }
  }
  return best;
}

// Per-state probability of reaching each target subtree (matched
// structurally, so targets must differ from each other and from every
// intermediate node) from `node` through binary determined nodes.
inline std::vector<std::pair<Rational, Rational>> ReachProbabilities(
    const NodePtr& node, const std::vector<NodePtr>& targets) {
  std::vector<std::pair<Rational, Rational>> out(targets.size());
  auto walk = [&](auto&& self, const NodePtr& n, const Rational& r1,
                  const Rational& r2) -> void {
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (StructurallyEqual(*targets[i], *n)) {
        out[i].first += r1;
        out[i].second += r2;
        return;
      }
    }
    if (!n->is_determined()) throw std::logic_error("unexpected node kind");
    const Experiment& e = n->experiment();
    self(self, n->child_ptr(0), r1 * e.q1, r2 * e.q2);
    self(self, n->child_ptr(1), r1 * (Rational(1) - e.q1),
         r2 * (Rational(1) - e.q2));
  };
  walk(walk, node, Rational(1), Rational(1));
  return out;
}

// Sender utility at a leaf: the receiver convicts iff the posterior is at
// least 1/2.
inline Rational LeafValue(const Rational& p) {
  return p >= Rational(1, 2) ? Rational(1) : Rational(0);
}

}  // namespace persuasion::testing

#endif  // PERSUASION_TESTS_TEST_UTIL_H_
