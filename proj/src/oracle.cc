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

#include "persuasion/oracle.h"

#include <algorithm>
#include <utility>
#include <vector>

#include "persuasion/errors.h"
#include "persuasion/grid_kernel.h"
#include "persuasion/twophase.h"

namespace persuasion {
namespace {

const Rational kZero(0);
const Rational kOne(1);
const Rational kHalf(1, 2);

constexpr std::size_t kBatch = 4096;

Strategy StrategyFrom(const std::vector<NodePath>& designed,
                      const std::vector<Rational>& x, const Rational& prior) {
  Strategy s;
  s.prior = prior;
  for (std::size_t j = 0; j < designed.size(); ++j) {
    s.designed[designed[j]] = {x[2 * j], x[2 * j + 1]};
  }
  return s;
}

Rational Utility(const TrialTree& tree, const std::vector<NodePath>& designed,
                 const std::vector<Rational>& x, const Rational& prior) {
  return EvaluateStrategy(tree, StrategyFrom(designed, x, prior), prior,
                          ActionMode::kObedient)
      .sender_utility;
}

// Lexicographic index -> grid integers, first parameter most significant.
void Decode(std::uint64_t index, int num_params, int grid, long* out) {
  for (int j = num_params - 1; j >= 0; --j) {
    out[j] = static_cast<long>(index % static_cast<std::uint64_t>(grid + 1));
    index /= static_cast<std::uint64_t>(grid + 1);
  }
}

std::vector<long> BestOnGrid(const CompiledTree& t, std::uint64_t total) {
  const int np = t.num_params;
  std::vector<long> best(static_cast<std::size_t>(np), 0);
  std::vector<long> cur(static_cast<std::size_t>(np), 0);
  if (!t.fits_double) {
    mpz_class best_value = -1;
    for (std::uint64_t i = 0; i < total; ++i) {
      Decode(i, np, t.grid, cur.data());
      mpz_class v = EvaluateExact(t, cur);
      if (v > best_value) {
        best_value = v;
        best = cur;
      }
    }
    return best;
  }
  std::vector<double> params(static_cast<std::size_t>(np) * kBatch);
  std::vector<double> out(kBatch);
  double best_value = -1;
  for (std::uint64_t start = 0; start < total; start += kBatch) {
    std::size_t count =
        static_cast<std::size_t>(std::min<std::uint64_t>(kBatch, total - start));
    for (std::size_t c = 0; c < count; ++c) {
      Decode(start + c, np, t.grid, cur.data());
      for (int j = 0; j < np; ++j) {
        params[static_cast<std::size_t>(j) * count + c] =
            static_cast<double>(cur[static_cast<std::size_t>(j)]);
      }
    }
    EvaluateBatch(t, params.data(), count, out.data());
    for (std::size_t c = 0; c < count; ++c) {
      // Strictly greater keeps the lexicographically first maximizer.
      if (out[c] > best_value) {
        best_value = out[c];
        Decode(start + c, np, t.grid, best.data());
      }
    }
  }
  return best;
}

// P(theta1 | outcome) >= 1/2 summed over outcomes: the obedient receiver's
// phi1 mass behind one experiment at interim belief w.
Rational SideValue(const Experiment& e, const Rational& w) {
  Rational total;
  const std::pair<Rational, Rational> outcomes[] = {
      {e.q1, e.q2}, {kOne - e.q1, kOne - e.q2}};
  for (const auto& [a, b] : outcomes) {
    Rational m1 = w * a;
    Rational m2 = (kOne - w) * b;
    if ((m1 + m2).sign() > 0 && m1 >= m2) total += m1 + m2;
  }
  return total;
}

std::vector<Rational> InterimCandidates(const Experiment& e,
                                        const Rational& prior) {
  Thresholds t = ComputeThresholds(e);
  std::vector<Rational> out = {t.alpha_low, t.beta_low, kZero, kOne, prior};
  std::vector<Rational> unique;
  for (Rational& r : out) {
    if (std::find(unique.begin(), unique.end(), r) == unique.end()) {
      unique.push_back(std::move(r));
    }
  }
  return unique;
}

}  // namespace

std::uint64_t GridCandidates(int designed_nodes, int grid) {
  std::uint64_t total = 1;
  for (int i = 0; i < 2 * designed_nodes; ++i) {
    total *= static_cast<std::uint64_t>(grid + 1);
    if (total > kGridBudget) return kGridBudget + 1;
  }
  return total;
}

OracleResult GridSearch(const TrialTree& tree, const Rational& prior, int grid,
                        int refinement_rounds) {
  if (refinement_rounds < 0) {
    throw ValidationError("refinement rounds must be nonnegative");
  }
  CompiledTree t = CompileTree(tree, prior, grid);
  const int d = static_cast<int>(t.designed.size());
  std::uint64_t total = GridCandidates(d, grid);
  if (total > kGridBudget) {
    throw ValidationError("grid search budget exceeded: (G+1)^(2d) > " +
                          std::to_string(kGridBudget) + " for G = " +
                          std::to_string(grid) + ", d = " + std::to_string(d));
  }
  std::vector<long> best = BestOnGrid(t, total);

  std::vector<Rational> x;
  for (long k : best) x.emplace_back(k, grid);
  Rational value = Utility(tree, t.designed, x, prior);
  Rational kernel_value(mpq_class(EvaluateExact(t, best), t.denominator));
  if (value != kernel_value) {
    throw ConsistencyError("grid kernel disagrees with exact evaluation: " +
                           kernel_value.ToString() + " vs " +
                           value.ToString());
  }

  Rational step(1, grid);
  for (int r = 1; r <= refinement_rounds; ++r) {
    step /= Rational(2);
    const Rational deltas[] = {-Rational(2) * step, -step, step,
                               Rational(2) * step};
    for (int pass = 0; pass < 64; ++pass) {
      bool improved = false;
      for (std::size_t j = 0; j < x.size(); ++j) {
        for (const Rational& delta : deltas) {
          Rational cand = Min(kOne, Max(kZero, x[j] + delta));
          if (cand == x[j]) continue;
          std::vector<Rational> y = x;
          y[j] = cand;
          Rational v = Utility(tree, t.designed, y, prior);
          if (v > value) {
            value = std::move(v);
            x = std::move(y);
            improved = true;
          }
        }
      }
      if (!improved) break;
    }
  }

  OracleResult out;
  out.best_value = value;
  out.best_params = StrategyFrom(t.designed, x, prior).designed;
  out.grid_resolution = grid;
  out.refinement_rounds = refinement_rounds;
  mpz_class final_resolution = mpz_class(grid) << refinement_rounds;
  out.error_bound = Rational(mpq_class(4 * d, final_resolution));
  return out;
}

OracleResult EnumerateTwoPhase(const Experiment& e_a, const Experiment& e_b,
                               const Rational& prior) {
  if (!prior.in_unit_interval()) {
    throw ValidationError("prior outside [0,1]: " + prior.ToString());
  }
  std::optional<std::pair<SplitChoice, Rational>> best;
  auto offer = [&](SplitChoice s) {
    Rational v;
    if (s.y.sign() > 0) v += s.y * SideValue(e_a, s.u);
    if (s.y < kOne) v += (kOne - s.y) * SideValue(e_b, s.v);
    if (!best || v > best->second) best.emplace(std::move(s), std::move(v));
  };
  offer({kOne, prior, prior});
  offer({kZero, prior, prior});
  for (const Rational& u : InterimCandidates(e_a, prior)) {
    for (const Rational& v : InterimCandidates(e_b, prior)) {
      if (u == v || prior < Min(u, v) || Max(u, v) < prior) continue;
      offer({(prior - v) / (u - v), u, v});
    }
  }
  const SplitChoice& s = best->first;
  DesignedParams params{s.y, s.y};
  if (prior.sign() > 0 && prior < kOne) {
    params = {s.y * s.u / prior, s.y * (kOne - s.u) / (kOne - prior)};
  }
  OracleResult out;
  out.best_value = best->second;
  out.best_params[{}] = params;
  return out;
}

}  // namespace persuasion
