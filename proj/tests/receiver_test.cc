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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "persuasion/dp.h"
#include "persuasion/errors.h"
#include "persuasion/receiver.h"
#include "persuasion/twophase.h"
#include "test_util.h"

namespace persuasion {
namespace {

using testing::Q;

Experiment E(const char* q1, const char* q2) { return Experiment(Q(q1), Q(q2)); }

// Valid for the inferiority test: q1 >= q2 and q2 < 1.
Experiment RandomCandidate(testing::Random& rng) {
  for (;;) {
    Experiment e = rng.Any(10);
    if (e.q1 < e.q2) std::swap(e.q1, e.q2);
    if (e.q2 < 1) return e;
  }
}

TEST_CASE("full control reveals the state") {
  auto [a, b] = FullControlOptimum();
  CHECK(a == Experiment(1, 0));
  CHECK(b == Experiment(1, 0));
  TrialTree t = TwoPhaseTree(a, b);
  Solution s = SolveCurves(t);
  for (const Rational& p : testing::Random::Grid(101)) {
    CHECK(ReceiverValue(t, s, p) == 1);
    CHECK(s.root().Eval(p) == p);
  }
}

TEST_CASE("inferiority examples") {
  // First condition: 2/3 <= 19/26 and max(1/10, 1/2) < 4/7.
  CHECK(IsInferior(E("0.55", "0.1"), E("2/3", "5/12")));
  // Second condition: 9/10 > 6/7, 0.85 < 0.9 and 3/10 < 1/2.
  CHECK(IsInferior(E("0.85", "0.5"), E("0.9", "0.8")));
  CHECK_FALSE(IsInferior(E("2/3", "5/12"), E("0.9", "0.8")));
  CHECK_FALSE(IsInferior(E("0.9", "0.8"), E("2/3", "5/12")));
  CHECK_FALSE(IsInferior(E("2/3", "5/12"), E("2/3", "5/12")));
  CHECK_THROWS_AS(IsInferior(E("1", "1"), E("2/3", "5/12")), ValidationError);
  CHECK_THROWS_AS(IsInferior(E("0.2", "0.5"), E("2/3", "5/12")),
                  ValidationError);
}

TEST_CASE("inferiority is irreflexive and asymmetric") {
  testing::Random rng(79);
  for (int i = 0; i < 3000; ++i) {
    Experiment x = RandomCandidate(rng), y = RandomCandidate(rng);
    CHECK_FALSE(IsInferior(x, x));
    CHECK_FALSE((IsInferior(x, y) && IsInferior(y, x)));
  }
}

TEST_CASE("inferiority against receiver utility (reported, not asserted)") {
  testing::Random rng(83);
  int triples = 0, violations = 0;
  while (triples < 20) {
    Experiment x = RandomCandidate(rng), y = RandomCandidate(rng);
    if (!IsInferior(x, y)) continue;
    ++triples;
    Experiment a = RandomCandidate(rng);
    TrialTree tx = TwoPhaseTree(a, x), ty = TwoPhaseTree(a, y);
    for (const Rational& p : testing::Random::Grid(50)) {
      if (ReceiverValue(ty, p) < ReceiverValue(tx, p)) ++violations;
    }
  }
  MESSAGE("inferior-but-better receiver values: ", violations, " of 1000");
}

TEST_CASE("pareto filter") {
  CandidateSet set{E("0.7", "0.5"), {E("0.55", "0.1"), E("2/3", "5/12")}, 0,
                   1};
  CHECK(ParetoFilter(set) == std::vector<Experiment>{E("2/3", "5/12")});
  set.candidates = {E("0.9", "0.8")};
  CHECK(ParetoFilter(set) == set.candidates);
  set.candidates = {E("2/3", "5/12"), E("0.9", "0.8")};
  CHECK(ParetoFilter(set) == set.candidates);
  // A candidate with q2 = 1 cannot be compared, so it is kept.
  set.candidates = {E("1", "1"), E("0.9", "0.8")};
  CHECK(ParetoFilter(set).size() == 2);
}

TEST_CASE("candidate set validation") {
  CandidateSet set{E("0.7", "0.5"), {}, 0, 1};
  CHECK_THROWS_AS(set.Validate(), ValidationError);
  set.candidates = {E("0.2", "0.5")};
  CHECK_THROWS_AS(set.Validate(), ValidationError);
  set.candidates = {E("0.5", "0.2")};
  set.lo = Q("3/4");
  set.hi = Q("1/4");
  CHECK_THROWS_AS(set.Validate(), ValidationError);
  set.lo = 0;
  set.hi = 1;
  CHECK_THROWS_AS(MaximinSelect(set, 1), ValidationError);
}

TEST_CASE("maximin examples") {
  // Full revelation needs both experiments revealing; with an informative
  // but noisy E_A the sender can still steer the receiver.
  CandidateSet reveal{Experiment(1, 0), {Experiment(1, 0)}, 0, 1};
  MaximinResult r = MaximinSelect(reveal, 11);
  CHECK(r.winner == Experiment(1, 0));
  CHECK(r.worst_case_utility == 1);
  reveal.fixed = E("0.7", "0.5");
  CHECK(MaximinSelect(reveal, 11).worst_case_utility < 1);

  CandidateSet twins{E("0.7", "0.5"), {E("0.8", "0.3"), E("0.8", "0.3")},
                     Q("1/4"), Q("3/4")};
  MaximinResult t = MaximinSelect(twins, 11);
  CHECK(t.table[0].worst_case == t.table[1].worst_case);
  CHECK(t.table.size() == 2);
  CHECK(t.winner == E("0.8", "0.3"));

  CandidateSet example{E("0.7", "0.5"), {E("2/3", "5/12"), E("0.9", "0.8")},
                       0, 1};
  MaximinResult m = MaximinSelect(example, 101);
  CHECK(m.winner == E("2/3", "5/12"));
}

TEST_CASE("worst case is the minimum over the evaluation priors") {
  CandidateSet set{E("0.7", "0.5"), {E("0.8", "0.3")}, Q("1/5"), Q("4/5")};
  MaximinResult m = MaximinSelect(set, 9);
  TrialTree t = TwoPhaseTree(set.fixed, set.candidates[0]);
  Solution s = SolveCurves(t);
  std::vector<Rational> priors =
      EvaluationPriors(s.root(), set.lo, set.hi, 9);
  CHECK(priors.front() == set.lo);
  CHECK(priors.back() == set.hi);
  Rational worst(1);
  for (const Rational& p : priors) worst = Min(worst, ReceiverValue(t, s, p));
  CHECK(m.worst_case_utility == worst);
  CHECK(m.table[0].evaluations == static_cast<int>(priors.size()));
}

TEST_CASE("maximin invariance under duplication and inferior additions") {
  testing::Random rng(89);
  int sets = 0;
  while (sets < 20) {
    CandidateSet set;
    set.fixed = RandomCandidate(rng);
    int n = rng.Int(1, 4);
    for (int i = 0; i < n; ++i) set.candidates.push_back(RandomCandidate(rng));
    set.lo = rng.Unit(6);
    set.hi = rng.Unit(6);
    if (set.hi < set.lo) std::swap(set.lo, set.hi);
    MaximinResult base = MaximinSelect(set, 7);

    CandidateSet dup = set;
    dup.candidates.push_back(set.candidates[rng.Int(0, n - 1)]);
    MaximinResult with_dup = MaximinSelect(dup, 7);
    CHECK(with_dup.winner == base.winner);
    CHECK(with_dup.worst_case_utility == base.worst_case_utility);

    // Look for a random experiment inferior to some candidate.
    for (int tries = 0; tries < 200; ++tries) {
      Experiment x = RandomCandidate(rng);
      bool inferior = false;
      for (const Experiment& y : set.candidates) {
        inferior = inferior || IsInferior(x, y);
      }
      if (!inferior) continue;
      CandidateSet grown = set;
      grown.candidates.push_back(x);
      MaximinResult g = MaximinSelect(grown, 7);
      CHECK(g.winner == base.winner);
      CHECK(g.worst_case_utility == base.worst_case_utility);
      ++sets;
      break;
    }
  }
}

}  // namespace
}  // namespace persuasion
