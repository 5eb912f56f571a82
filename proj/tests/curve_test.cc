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

#include <vector>

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "persuasion/curve.h"
#include "persuasion/dp.h"
#include "persuasion/errors.h"
#include "test_util.h"

namespace persuasion {
namespace {

using testing::Q;

// Curves that actually occur: every node curve of some random trees.
std::vector<ValueCurve> CurveZoo(std::uint32_t seed, int trees) {
  testing::Random rng(seed);
  std::vector<ValueCurve> out = {LeafCurve(), SinglePhaseCurve(),
                                 ValueCurve::Constant(Rational(0))};
  for (int i = 0; i < trees; ++i) {
    for (auto& [path, curve] : SolveCurves(rng.Tree(3, 2)).curves) {
      out.push_back(curve);
    }
  }
  return out;
}

// Breakpoints of both curves, their midpoints and a few fixed beliefs.
std::vector<Rational> Probes(const ValueCurve& a, const ValueCurve& b) {
  std::vector<Rational> out = {Q("1/7"), Q("1/3"), Q("1/2"), Q("5/8"),
                               Q("9/10")};
  for (const ValueCurve* c : {&a, &b}) {
    const auto& x = c->breakpoints();
    for (std::size_t i = 0; i < x.size(); ++i) {
      out.push_back(x[i]);
      if (i + 1 < x.size()) out.push_back((x[i] + x[i + 1]) / Rational(2));
    }
  }
  return out;
}

TEST_CASE("construction checks") {
  CHECK_THROWS_AS(ValueCurve({Rational(0)}, {}, {Rational(0)}),
                  ValidationError);
  CHECK_THROWS_AS(
      ValueCurve({Rational(0), Q("1/2")}, {Line{0, 0}}, {0, 0}),
      ValidationError);
  CHECK_THROWS_AS(ValueCurve({Rational(0), Q("1/2"), Q("1/2"), Rational(1)},
                             {Line{0, 0}, Line{0, 0}, Line{0, 0}},
                             {0, 0, 0, 0}),
                  ValidationError);
  CHECK_THROWS_AS(
      ValueCurve({Rational(0), Rational(1)}, {Line{0, 0}}, {Rational(0)}),
      ValidationError);
}

TEST_CASE("collinear pieces merge into one canonical form") {
  ValueCurve a = ValueCurve::Polyline(
      {{0, 0}, {Q("1/4"), Q("1/4")}, {Q("1/2"), Q("1/2")}, {1, 1}});
  ValueCurve b = ValueCurve::Polyline({{0, 0}, {1, 1}});
  CHECK(a == b);
  CHECK(a.size() == 2);
  // A jump at 1/2 is not merged away.
  ValueCurve leaf = LeafCurve();
  CHECK(leaf.breakpoints() == std::vector<Rational>{0, Q("1/2"), 1});
  CHECK(leaf.Eval(Q("1/2")) == 1);
  CHECK(*leaf.LeftLimit(1) == 0);
  CHECK(*leaf.RightLimit(1) == 1);
  CHECK(leaf.Eval(Q("0.49")) == 0);
}

TEST_CASE("determined transform worked example") {
  Experiment e(Q("4/5"), Q("1/5"));
  ValueCurve v = DeterminedTransform(e, LeafCurve(), LeafCurve());
  CHECK(v.Eval(Q("1/5")) == Q("8/25"));
  auto seg = v.SegmentContaining(Q("1/2"));
  REQUIRE(seg.has_value());
  CHECK(v.segments()[*seg] == Line{Q("3/5"), Q("1/5")});
  CHECK(v.breakpoints() == std::vector<Rational>{0, Q("1/5"), Q("4/5"), 1});
}

TEST_CASE("determined transform equals the Bayes average pointwise") {
  std::vector<ValueCurve> zoo = CurveZoo(101, 12);
  testing::Random rng(2);
  for (int trial = 0; trial < 120; ++trial) {
    const ValueCurve& pass = zoo[rng.Int(0, zoo.size() - 1)];
    const ValueCurve& fail = zoo[rng.Int(0, zoo.size() - 1)];
    Experiment e = rng.Any();
    ValueCurve v = DeterminedTransform(e, pass, fail);
    for (const Rational& p : Probes(v, pass)) {
      Rational expected(0);
      if (auto post = e.PassPosterior(p)) {
        expected += e.PassProbability(p) * pass.Eval(*post);
      }
      if (auto post = e.FailPosterior(p)) {
        expected += e.FailProbability(p) * fail.Eval(*post);
      }
      CHECK(v.Eval(p) == expected);
    }
  }
}

TEST_CASE("n-ary transform equals the Bayes average pointwise") {
  NaryExperiment e({Q("1/2"), Q("1/4"), Q("1/4")},
                   {Q("1/6"), Q("1/3"), Q("1/2")});
  std::vector<ValueCurve> kids = {LeafCurve(), SinglePhaseCurve(),
                                  LeafCurve()};
  ValueCurve v = DeterminedTransformNary(e, kids);
  for (const Rational& p : testing::Random::Grid(61)) {
    Rational expected(0);
    for (std::size_t i = 0; i < 3; ++i) {
      Rational m1 = p * e.q1[i], m2 = (Rational(1) - p) * e.q2[i];
      if ((m1 + m2).is_zero()) continue;
      expected += (m1 + m2) * kids[i].Eval(m1 / (m1 + m2));
    }
    CHECK(v.Eval(p) == expected);
  }
}

TEST_CASE("designed combine of two leaves is the single-phase curve") {
  CombineResult r = DesignedCombine(LeafCurve(), LeafCurve());
  CHECK(r.curve == SinglePhaseCurve());
  for (const Rational& p : testing::Random::Grid(101)) {
    CHECK(r.curve.Eval(p) == testing::SinglePhaseValue(p));
  }
  SplitChoice s = r.extractor.Choose(Q("1/3"));
  CHECK(s == SplitChoice{Q("2/3"), Q("1/2"), Rational(0)});
}

TEST_CASE("revealing node gives V(p) = p") {
  ValueCurve v =
      DeterminedTransform(Experiment(1, 0), LeafCurve(), LeafCurve());
  CHECK(v == ValueCurve::Polyline({{0, 0}, {1, 1}}));
}

TEST_CASE("designed combine matches the brute-force split") {
  std::vector<ValueCurve> zoo = CurveZoo(202, 10);
  testing::Random rng(4);
  for (int trial = 0; trial < 80; ++trial) {
    const ValueCurve& a = zoo[rng.Int(0, zoo.size() - 1)];
    const ValueCurve& b = zoo[rng.Int(0, zoo.size() - 1)];
    CombineResult r = DesignedCombine(a, b);
    for (const Rational& p : Probes(r.curve, a)) {
      CAPTURE(p);
      CHECK(r.curve.Eval(p) == testing::BruteForceSplit(a, b, p));
    }
    for (const Rational& p : Probes(b, b)) {
      CHECK(r.curve.Eval(p) == testing::BruteForceSplit(a, b, p));
    }
  }
}

TEST_CASE("designed combine properties") {
  std::vector<ValueCurve> zoo = CurveZoo(303, 10);
  testing::Random rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    const ValueCurve& a = zoo[rng.Int(0, zoo.size() - 1)];
    const ValueCurve& b = zoo[rng.Int(0, zoo.size() - 1)];
    CombineResult ab = DesignedCombine(a, b);
    // The branches are interchangeable.
    CHECK(ab.curve == DesignedCombine(b, a).curve);
    ValueCurve hull = UpperConcaveEnvelope(PointwiseMax(a, b));
    for (const Rational& p : Probes(ab.curve, hull)) {
      Rational g = ab.curve.Eval(p);
      CHECK(Max(a.Eval(p), b.Eval(p)) <= g);
      CHECK(g <= hull.Eval(p));
      // Every reported split attains the value and averages to p.
      for (const SplitChoice& s : ab.extractor.OptimalSplits(p)) {
        CHECK(ab.extractor.SplitValue(s) == g);
        CHECK(s.y * s.u + (Rational(1) - s.y) * s.v == p);
        CHECK(s.y.in_unit_interval());
      }
      SplitChoice first = ab.extractor.Choose(p);
      for (const SplitChoice& s : ab.extractor.OptimalSplits(p)) {
        CHECK(s.y <= first.y);
      }
    }
  }
}

TEST_CASE("n-ary designed combine is a left fold") {
  std::vector<ValueCurve> zoo = CurveZoo(404, 4);
  ValueCurve folded =
      DesignedCombine(DesignedCombine(zoo[3], zoo[4]).curve, zoo[5]).curve;
  CHECK(DesignedCombineNary({zoo[3], zoo[4], zoo[5]}) == folded);
}

TEST_CASE("upper envelope is the pointwise max of its pieces") {
  testing::Random rng(8);
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<Piece> pieces;
    int n = rng.Int(1, 6);
    for (int i = 0; i < n; ++i) {
      Rational lo = rng.Unit(8), hi = rng.Unit(8);
      if (hi < lo) std::swap(lo, hi);
      bool closed = lo == hi || rng.Coin();
      pieces.push_back({lo, hi,
                        Line{rng.Unit(6) - rng.Unit(6), rng.Unit(6)}, closed});
    }
    Rational fill = rng.Coin() ? Rational(0) : rng.Unit(4);
    ValueCurve env = UpperEnvelope(pieces, fill);
    std::vector<Rational> probes = testing::Random::Grid(49);
    for (const Piece& pc : pieces) {
      probes.push_back(pc.lo);
      probes.push_back(pc.hi);
    }
    for (const Rational& x : probes) {
      std::optional<Rational> best;
      for (const Piece& pc : pieces) {
        bool covers = pc.closed ? (pc.lo <= x && x <= pc.hi)
                                : (pc.lo < x && x < pc.hi);
        if (covers && (!best || *best < pc.line.At(x))) best = pc.line.At(x);
      }
      CAPTURE(x);
      CHECK(env.Eval(x) == best.value_or(fill));
    }
  }
}

TEST_CASE("concave envelope equals the two-point self split") {
  std::vector<ValueCurve> zoo = CurveZoo(505, 8);
  for (const ValueCurve& a : zoo) {
    ValueCurve hull = UpperConcaveEnvelope(a);
    for (std::size_t i = 0; i + 1 < hull.segments().size(); ++i) {
      CHECK(hull.segments()[i + 1].slope < hull.segments()[i].slope);
    }
    for (const Rational& p : Probes(a, hull)) {
      CHECK(hull.Eval(p) == testing::BruteForceSplit(a, a, p));
    }
  }
}

TEST_CASE("pointwise max") {
  ValueCurve a = ValueCurve::Polyline({{0, 0}, {1, 1}});
  ValueCurve b = ValueCurve::Constant(Q("1/2"));
  ValueCurve m = PointwiseMax(a, b);
  CHECK(m == ValueCurve::Polyline({{0, Q("1/2")}, {Q("1/2"), Q("1/2")},
                                   {1, 1}}));
}

TEST_CASE("every solved curve satisfies the invariants") {
  for (const ValueCurve& c : CurveZoo(606, 40)) {
    std::vector<std::string> problems = CheckCurveInvariants(c);
    CHECK_MESSAGE(problems.empty(), c.DebugString());
  }
  ValueCurve bad = ValueCurve::Constant(Rational(1));
  CHECK_FALSE(CheckCurveInvariants(bad).empty());
}

TEST_CASE("samples and persuasion ratios") {
  std::vector<CurveSample> s = Sample(SinglePhaseCurve(), 5);
  REQUIRE(s.size() == 5);
  CHECK(s[0].p == 0);
  CHECK(*s[0].ratio == 2);
  CHECK(*s[2].ratio == 2);
  CHECK(*s[4].ratio == 1);
  std::vector<CurveSample> leaf = Sample(LeafCurve(), 3);
  CHECK(*leaf[0].ratio == 0);
  std::vector<CurveSample> jump = Sample(ValueCurve::Constant(Q("1/2")), 2);
  CHECK_FALSE(jump[0].ratio.has_value());
}

}  // namespace
}  // namespace persuasion
