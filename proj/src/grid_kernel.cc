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

#include "persuasion/grid_kernel.h"

#include <map>

#include "persuasion/errors.h"

namespace persuasion {
namespace {

// Smallest common denominator of a node's outcome probabilities.
mpz_class NodeDenominator(const TreeNode& node) {
  mpz_class d = 1;
  auto fold = [&](const Rational& r) {
    mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), r.den().get_mpz_t());
  };
  if (node.is_determined()) {
    fold(node.experiment().q1);
    fold(node.experiment().q2);
  } else {
    for (const Rational& r : node.nary_experiment().q1) fold(r);
    for (const Rational& r : node.nary_experiment().q2) fold(r);
  }
  return d;
}

struct Builder {
  int grid;
  std::map<NodePath, int> designed_index;
  CompiledTree* out;

  // Walk with per-state numerators and the product of the scales on the
  // current path (G at designed nodes, the node denominator elsewhere).
  void Walk(const TreeNode& node, NodePath& path, LeafProgram acc,
            const mpz_class& path_scale) {
    switch (node.kind()) {
      case NodeKind::kLeaf:
        // Pad by the scales of every node off this path.
        acc.constant1 *= out->denominator;
        acc.constant1 /= path_scale;
        acc.constant2 *= out->denominator;
        acc.constant2 /= path_scale;
        out->leaves.push_back(std::move(acc));
        return;
      case NodeKind::kDesigned: {
        int j = designed_index.at(path);
        for (int side = 0; side < 2; ++side) {
          LeafProgram next = acc;
          next.factors1.push_back({2 * j, side == 1});
          next.factors2.push_back({2 * j + 1, side == 1});
          path.push_back(side);
          Walk(node.child(static_cast<std::size_t>(side)), path,
               std::move(next), path_scale * grid);
          path.pop_back();
        }
        return;
      }
      case NodeKind::kDetermined:
      case NodeKind::kDeterminedNary: {
        mpz_class d = NodeDenominator(node);
        std::vector<std::pair<Rational, Rational>> outcomes;
        if (node.is_determined()) {
          const Experiment& e = node.experiment();
          outcomes = {{e.q1, e.q2},
                      {Rational(1) - e.q1, Rational(1) - e.q2}};
        } else {
          const NaryExperiment& e = node.nary_experiment();
          for (std::size_t k = 0; k < e.arity(); ++k) {
            outcomes.emplace_back(e.q1[k], e.q2[k]);
          }
        }
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
          LeafProgram next = acc;
          next.constant1 *= mpz_class(outcomes[k].first.get() * d);
          next.constant2 *= mpz_class(outcomes[k].second.get() * d);
          path.push_back(static_cast<int>(k));
          Walk(node.child(k), path, std::move(next), path_scale * d);
          path.pop_back();
        }
        return;
      }
    }
  }
};

void ScaleProduct(const TreeNode& node, int grid, mpz_class& acc) {
  if (node.is_designed()) {
    acc *= grid;
  } else if (!node.is_leaf()) {
    acc *= NodeDenominator(node);
  }
  for (const NodePtr& c : node.children()) ScaleProduct(*c, grid, acc);
}

}  // namespace

CompiledTree CompileTree(const TrialTree& tree, const Rational& prior,
                         int grid) {
  if (grid < 1) throw ValidationError("grid resolution must be at least 1");
  if (!prior.in_unit_interval()) {
    throw ValidationError("prior outside [0,1]: " + prior.ToString());
  }
  CompiledTree out;
  out.grid = grid;
  out.designed = DesignedPaths(*tree.root);
  out.num_params = 2 * static_cast<int>(out.designed.size());
  out.denominator = prior.den();
  ScaleProduct(*tree.root, grid, out.denominator);

  Builder b{grid, {}, &out};
  for (std::size_t j = 0; j < out.designed.size(); ++j) {
    b.designed_index[out.designed[j]] = static_cast<int>(j);
  }
  LeafProgram root;
  root.constant1 = prior.num();
  root.constant2 = prior.den() - prior.num();
  NodePath path;
  b.Walk(*tree.root, path, std::move(root), prior.den());

  // Every partial product is bounded by D, and so is the utility numerator.
  static const mpz_class kExactLimit = mpz_class(1) << 53;
  out.fits_double = out.denominator < kExactLimit;
  if (out.fits_double) {
    for (const LeafProgram& leaf : out.leaves) {
      out.constant1.push_back(leaf.constant1.get_d());
      out.constant2.push_back(leaf.constant2.get_d());
    }
  }
  return out;
}

void EvaluateBatchScalar(const CompiledTree& t, const double* params,
                         std::size_t count, double* out) {
  const double g = t.grid;
  for (std::size_t c = 0; c < count; ++c) {
    double total = 0;
    for (std::size_t l = 0; l < t.leaves.size(); ++l) {
      const LeafProgram& leaf = t.leaves[l];
      double n1 = t.constant1[l];
      for (const LeafFactor& f : leaf.factors1) {
        double k = params[static_cast<std::size_t>(f.param) * count + c];
        n1 *= f.complement ? g - k : k;
      }
      double n2 = t.constant2[l];
      for (const LeafFactor& f : leaf.factors2) {
        double k = params[static_cast<std::size_t>(f.param) * count + c];
        n2 *= f.complement ? g - k : k;
      }
      if (n1 >= n2) total += n1 + n2;
    }
    out[c] = total;
  }
}

bool Avx2Available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

void EvaluateBatch(const CompiledTree& t, const double* params,
                   std::size_t count, double* out) {
  if (!t.fits_double) {
    throw ValidationError("grid kernel needs a denominator below 2^53");
  }
  static const bool avx2 = Avx2Available();
  if (avx2) {
    EvaluateBatchAvx2(t, params, count, out);
  } else {
    EvaluateBatchScalar(t, params, count, out);
  }
}

mpz_class EvaluateExact(const CompiledTree& t,
                        const std::vector<long>& params) {
  mpz_class total = 0;
  const long g = t.grid;
  for (const LeafProgram& leaf : t.leaves) {
    mpz_class n1 = leaf.constant1;
    for (const LeafFactor& f : leaf.factors1) {
      long k = params[static_cast<std::size_t>(f.param)];
      n1 *= f.complement ? g - k : k;
    }
    mpz_class n2 = leaf.constant2;
    for (const LeafFactor& f : leaf.factors2) {
      long k = params[static_cast<std::size_t>(f.param)];
      n2 *= f.complement ? g - k : k;
    }
    if (n1 >= n2) total += n1 + n2;
  }
  return total;
}

}  // namespace persuasion
