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

#ifndef PERSUASION_CURVE_H_
#define PERSUASION_CURVE_H_

#include <optional>
#include <string>
#include <vector>

#include "persuasion/model.h"
#include "persuasion/rational.h"

namespace persuasion {

// value = slope * p + intercept.
struct Line {
  Rational slope;
  Rational intercept;

  Rational At(const Rational& p) const { return slope * p + intercept; }
  friend bool operator==(const Line&, const Line&) = default;
};

// Piecewise-linear function on [0,1], possibly discontinuous. segments[i]
// holds on the open interval (breakpoints[i], breakpoints[i+1]); values[i] is
// the value attained exactly at breakpoints[i]. Adjacent collinear segments
// with a continuous junction are always merged, so two curves describing the
// same function compare equal.
class ValueCurve {
 public:
  // The zero function.
  ValueCurve();
  // Throws ValidationError unless breakpoints run strictly upward from 0 to 1
  // and the three lists have matching sizes.
  ValueCurve(std::vector<Rational> breakpoints, std::vector<Line> segments,
             std::vector<Rational> values);

  static ValueCurve Constant(const Rational& c);
  // Continuous curve through the given vertices (x strictly increasing from 0
  // to 1).
  static ValueCurve Polyline(
      const std::vector<std::pair<Rational, Rational>>& vertices);

  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<Line>& segments() const { return segments_; }
  const std::vector<Rational>& values() const { return values_; }
  std::size_t size() const { return breakpoints_.size(); }

  // p must lie in [0,1].
  Rational Eval(const Rational& p) const;
  // Index i with breakpoints[i] < p < breakpoints[i+1], or nullopt when p is
  // a breakpoint.
  std::optional<std::size_t> SegmentContaining(const Rational& p) const;
  // Limits from inside the adjacent segments; empty at the ends of [0,1].
  std::optional<Rational> LeftLimit(std::size_t i) const;
  std::optional<Rational> RightLimit(std::size_t i) const;

  std::string DebugString() const;

  friend bool operator==(const ValueCurve&, const ValueCurve&) = default;

 private:
  void Canonicalize();

  std::vector<Rational> breakpoints_;
  std::vector<Line> segments_;
  std::vector<Rational> values_;
};

// 0 on [0,1/2), 1 on [1/2,1]: the receiver follows at posterior >= 1/2.
ValueCurve LeafCurve();
// min(2p, 1).
ValueCurve SinglePhaseCurve();

// V(p) = P(pass) V_pass(post_pass(p)) + P(fail) V_fail(post_fail(p)).
ValueCurve DeterminedTransform(const Experiment& e, const ValueCurve& v_pass,
                               const ValueCurve& v_fail);
ValueCurve DeterminedTransformNary(const NaryExperiment& e,
                                   const std::vector<ValueCurve>& children);

// A piece of a candidate function: the line restricted to [lo, hi]. Open
// pieces exclude both endpoints; a point piece has lo == hi and is closed.
struct Piece {
  Rational lo;
  Rational hi;
  Line line;
  bool closed = true;
};

// Pointwise supremum of the pieces over [0,1]; `fill` where none applies.
ValueCurve UpperEnvelope(const std::vector<Piece>& pieces,
                         const Rational& fill = Rational(0));

// The curve itself as pieces: one open piece per segment, one point per
// breakpoint.
std::vector<Piece> CurvePieces(const ValueCurve& c);

// Send the left branch with probability y, at interim belief u; the right
// branch at v. y*u + (1-y)*v equals the belief it was chosen for.
struct SplitChoice {
  Rational y;
  Rational u;
  Rational v;
  friend bool operator==(const SplitChoice&, const SplitChoice&) = default;
};

// Maps beliefs to optimal splits for one designed node.
class SplitExtractor {
 public:
  SplitExtractor(ValueCurve left, ValueCurve right, ValueCurve combined);

  // Every split in the finite candidate family that attains the combined
  // value at p, best-first in canonical order: larger y first, then smaller
  // u, then smaller v. Throws ConsistencyError if none attains it.
  std::vector<SplitChoice> OptimalSplits(const Rational& p) const;
  // The first of OptimalSplits.
  SplitChoice Choose(const Rational& p) const;
  // y * V_left(u) + (1-y) * V_right(v).
  Rational SplitValue(const SplitChoice& s) const;

  const ValueCurve& left() const { return left_; }
  const ValueCurve& right() const { return right_; }
  const ValueCurve& combined() const { return combined_; }

 private:
  ValueCurve left_;
  ValueCurve right_;
  ValueCurve combined_;
};

struct CombineResult {
  ValueCurve curve;
  SplitExtractor extractor;
};

// G(p) = sup { y V_left(u) + (1-y) V_right(v) : y u + (1-y) v = p }.
CombineResult DesignedCombine(const ValueCurve& v_left,
                              const ValueCurve& v_right);
// Left fold of DesignedCombine over two or more children.
ValueCurve DesignedCombineNary(const std::vector<ValueCurve>& children);

ValueCurve PointwiseMax(const ValueCurve& a, const ValueCurve& b);
// Least concave majorant.
ValueCurve UpperConcaveEnvelope(const ValueCurve& a);

struct CurveSample {
  Rational p;
  Rational value;
  // value / p; at p = 0 the right-hand slope, empty if that limit diverges.
  std::optional<Rational> ratio;
};

// n >= 2 evenly spaced beliefs k/(n-1).
std::vector<CurveSample> Sample(const ValueCurve& a, int n);

// Violations of: 0 <= V <= 1, breakpoint value = max of one-sided limits,
// V nondecreasing, V <= min(1, 2p). Empty when all hold.
std::vector<std::string> CheckCurveInvariants(const ValueCurve& a);

}  // namespace persuasion

#endif  // PERSUASION_CURVE_H_
