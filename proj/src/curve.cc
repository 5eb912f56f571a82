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

#include "persuasion/curve.h"

#include <algorithm>
#include <sstream>
#include <utility>

#include "persuasion/errors.h"

namespace persuasion {
namespace {

const Rational kZero(0);
const Rational kOne(1);
const Rational kHalf(1, 2);

void SortUnique(std::vector<Rational>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

// One outcome of a determined node: reached with probability a under theta1
// and b under theta2, continuing with `curve`.
struct Branch {
  Rational a;
  Rational b;
  const ValueCurve* curve;
};

Rational BranchTerm(const Branch& br, const Rational& p) {
  Rational mass = p * br.a + (kOne - p) * br.b;
  if (mass.is_zero()) return kZero;
  return mass * br.curve->Eval(p * br.a / mass);
}

// Linear form of a branch term on an interval whose midpoint is m. The
// posterior map t(p) = p a / (p a + (1-p) b) either is constant there or stays
// inside one child segment, because every preimage of a child breakpoint is
// itself a breakpoint of the result.
Line BranchLine(const Branch& br, const Rational& m) {
  Rational mass = m * br.a + (kOne - m) * br.b;
  if (mass.is_zero()) return {kZero, kZero};
  Rational t = m * br.a / mass;
  std::optional<std::size_t> seg = br.curve->SegmentContaining(t);
  if (!seg) {
    // Constant posterior: the term is c * P(p).
    Rational c = br.curve->Eval(t);
    return {c * (br.a - br.b), c * br.b};
  }
  // P(p) (s t + c0) with t P(p) = p a.
  const Line& l = br.curve->segments()[*seg];
  return {l.slope * br.a + l.intercept * (br.a - br.b), l.intercept * br.b};
}

ValueCurve TransformBranches(const std::vector<Branch>& branches) {
  std::vector<Rational> xs = {kZero, kOne};
  for (const Branch& br : branches) {
    const auto& bps = br.curve->breakpoints();
    for (std::size_t i = 1; i + 1 < bps.size(); ++i) {
      const Rational& t = bps[i];
      // p a / (p a + (1-p) b) = t  <=>  p = t b / (a (1-t) + t b).
      Rational den = br.a * (kOne - t) + t * br.b;
      if (den.is_zero()) continue;
      Rational p = t * br.b / den;
      if (p.sign() > 0 && p < kOne) xs.push_back(std::move(p));
    }
  }
  SortUnique(xs);
  std::vector<Line> segments;
  std::vector<Rational> values;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Rational v;
    for (const Branch& br : branches) v += BranchTerm(br, xs[i]);
    values.push_back(std::move(v));
    if (i + 1 == xs.size()) break;
    Rational mid = (xs[i] + xs[i + 1]) / Rational(2);
    Line total{kZero, kZero};
    for (const Branch& br : branches) {
      Line l = BranchLine(br, mid);
      total.slope += l.slope;
      total.intercept += l.intercept;
    }
    segments.push_back(std::move(total));
  }
  return ValueCurve(std::move(xs), std::move(segments), std::move(values));
}

bool Covers(const Piece& piece, const Rational& x) {
  if (piece.closed) return piece.lo <= x && x <= piece.hi;
  return piece.lo < x && x < piece.hi;
}

// Upper envelope of full lines over the open interval (lo, hi). Appends the
// interior crossing points to `xs` and one line per resulting sub-interval.
void KineticEnvelope(const std::vector<const Line*>& lines, const Rational& lo,
                     const Rational& hi, std::vector<Rational>& xs,
                     std::vector<Line>& out) {
  // Start from the line that is highest just to the right of lo.
  const Line* cur = lines.front();
  Rational best = cur->At(lo);
  for (const Line* l : lines) {
    Rational v = l->At(lo);
    if (v > best || (v == best && l->slope > cur->slope)) {
      cur = l;
      best = std::move(v);
    }
  }
  Rational x = lo;
  for (;;) {
    // Only steeper lines can overtake; take the earliest crossing, steepest
    // on ties.
    const Line* next = nullptr;
    Rational at;
    for (const Line* l : lines) {
      if (l->slope <= cur->slope) continue;
      Rational cross =
          (cur->intercept - l->intercept) / (l->slope - cur->slope);
      if (cross <= x || cross >= hi) continue;
      if (!next || cross < at || (cross == at && l->slope > next->slope)) {
        next = l;
        at = std::move(cross);
      }
    }
    out.push_back(*cur);
    if (!next) return;
    xs.push_back(at);
    x = at;
    cur = next;
  }
}

}  // namespace

ValueCurve::ValueCurve()
    : breakpoints_{kZero, kOne}, segments_{{kZero, kZero}}, values_{0, 0} {}

ValueCurve::ValueCurve(std::vector<Rational> breakpoints,
                       std::vector<Line> segments, std::vector<Rational> values)
    : breakpoints_(std::move(breakpoints)),
      segments_(std::move(segments)),
      values_(std::move(values)) {
  if (breakpoints_.size() < 2 || breakpoints_.front() != kZero ||
      breakpoints_.back() != kOne) {
    throw ValidationError("curve breakpoints must run from 0 to 1");
  }
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i - 1] < breakpoints_[i])) {
      throw ValidationError("curve breakpoints must strictly increase");
    }
  }
  if (segments_.size() + 1 != breakpoints_.size() ||
      values_.size() != breakpoints_.size()) {
    throw ValidationError("curve segment/value counts do not match");
  }
  Canonicalize();
}

ValueCurve ValueCurve::Constant(const Rational& c) {
  return ValueCurve({kZero, kOne}, {{kZero, c}}, {c, c});
}

ValueCurve ValueCurve::Polyline(
    const std::vector<std::pair<Rational, Rational>>& vertices) {
  std::vector<Rational> xs, vals;
  std::vector<Line> segs;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    xs.push_back(vertices[i].first);
    vals.push_back(vertices[i].second);
    if (i + 1 < vertices.size()) {
      const auto& [x0, y0] = vertices[i];
      const auto& [x1, y1] = vertices[i + 1];
      if (!(x0 < x1)) throw ValidationError("polyline x must increase");
      Rational slope = (y1 - y0) / (x1 - x0);
      segs.push_back({slope, y0 - slope * x0});
    }
  }
  return ValueCurve(std::move(xs), std::move(segs), std::move(vals));
}

void ValueCurve::Canonicalize() {
  std::vector<Rational> xs{breakpoints_.front()};
  std::vector<Line> segs{segments_.front()};
  std::vector<Rational> vals{values_.front()};
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    bool interior = i + 1 < breakpoints_.size();
    if (interior && segments_[i] == segs.back() &&
        values_[i] == segs.back().At(breakpoints_[i])) {
      continue;
    }
    xs.push_back(breakpoints_[i]);
    vals.push_back(values_[i]);
    if (interior) segs.push_back(segments_[i]);
  }
  breakpoints_ = std::move(xs);
  segments_ = std::move(segs);
  values_ = std::move(vals);
}

std::optional<std::size_t> ValueCurve::SegmentContaining(
    const Rational& p) const {
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), p);
  if (it != breakpoints_.end() && *it == p) return std::nullopt;
  if (it == breakpoints_.begin() || it == breakpoints_.end()) {
    throw ValidationError("belief outside [0,1]: " + p.ToString());
  }
  return static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
}

Rational ValueCurve::Eval(const Rational& p) const {
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), p);
  if (it == breakpoints_.end() || (it == breakpoints_.begin() && *it != p)) {
    throw ValidationError("belief outside [0,1]: " + p.ToString());
  }
  std::size_t i = static_cast<std::size_t>(it - breakpoints_.begin());
  if (*it == p) return values_[i];
  return segments_[i - 1].At(p);
}

std::optional<Rational> ValueCurve::LeftLimit(std::size_t i) const {
  if (i == 0) return std::nullopt;
  return segments_[i - 1].At(breakpoints_[i]);
}

std::optional<Rational> ValueCurve::RightLimit(std::size_t i) const {
  if (i + 1 >= breakpoints_.size()) return std::nullopt;
  return segments_[i].At(breakpoints_[i]);
}

std::string ValueCurve::DebugString() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    os << "[" << breakpoints_[i] << "]=" << values_[i];
    if (i < segments_.size()) {
      os << " (" << segments_[i].slope << "p+" << segments_[i].intercept
         << ") ";
    }
  }
  return os.str();
}

ValueCurve LeafCurve() {
  return ValueCurve({kZero, kHalf, kOne}, {{kZero, kZero}, {kZero, kOne}},
                    {0, 1, 1});
}

ValueCurve SinglePhaseCurve() {
  return ValueCurve::Polyline({{kZero, kZero}, {kHalf, kOne}, {kOne, kOne}});
}

ValueCurve DeterminedTransform(const Experiment& e, const ValueCurve& v_pass,
                               const ValueCurve& v_fail) {
  return TransformBranches({{e.q1, e.q2, &v_pass},
                            {kOne - e.q1, kOne - e.q2, &v_fail}});
}

ValueCurve DeterminedTransformNary(const NaryExperiment& e,
                                   const std::vector<ValueCurve>& children) {
  if (children.size() != e.arity()) {
    throw ValidationError("n-ary transform: children count != arity");
  }
  std::vector<Branch> branches;
  for (std::size_t k = 0; k < children.size(); ++k) {
    branches.push_back({e.q1[k], e.q2[k], &children[k]});
  }
  return TransformBranches(branches);
}

ValueCurve UpperEnvelope(const std::vector<Piece>& pieces,
                         const Rational& fill) {
  std::vector<Rational> elementary = {kZero, kOne};
  for (const Piece& piece : pieces) {
    if (piece.hi < piece.lo || piece.lo < kZero || kOne < piece.hi) {
      throw ValidationError("envelope piece outside [0,1]");
    }
    elementary.push_back(piece.lo);
    elementary.push_back(piece.hi);
  }
  SortUnique(elementary);

  // Sweep in order of left endpoint, keeping the pieces that span the
  // current elementary interval.
  std::vector<const Piece*> order;
  for (const Piece& piece : pieces) {
    if (piece.lo < piece.hi) order.push_back(&piece);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const Piece* a, const Piece* b) { return a->lo < b->lo; });
  const Line fill_line{kZero, fill};
  std::vector<const Piece*> active;
  std::size_t next_piece = 0;

  std::vector<Rational> xs;
  std::vector<Line> segments;
  for (std::size_t i = 0; i + 1 < elementary.size(); ++i) {
    const Rational& lo = elementary[i];
    const Rational& hi = elementary[i + 1];
    while (next_piece < order.size() && order[next_piece]->lo <= lo) {
      active.push_back(order[next_piece++]);
    }
    std::erase_if(active, [&](const Piece* p) { return p->hi <= lo; });
    std::vector<const Line*> lines;
    for (const Piece* p : active) lines.push_back(&p->line);
    if (lines.empty()) lines.push_back(&fill_line);
    xs.push_back(lo);
    KineticEnvelope(lines, lo, hi, xs, segments);
  }
  xs.push_back(kOne);

  std::vector<Rational> values;
  std::size_t e = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Rational& x = xs[i];
    while (e < elementary.size() && elementary[e] < x) ++e;
    if (e < elementary.size() && elementary[e] == x) {
      std::optional<Rational> best;
      for (const Piece& piece : pieces) {
        if (!Covers(piece, x)) continue;
        Rational v = piece.line.At(x);
        if (!best || *best < v) best = std::move(v);
      }
      values.push_back(best ? *best : fill);
    } else {
      // Interior crossing: both neighbouring segments agree here.
      values.push_back(segments[i].At(x));
    }
  }
  return ValueCurve(std::move(xs), std::move(segments), std::move(values));
}

std::vector<Piece> CurvePieces(const ValueCurve& c) {
  std::vector<Piece> out;
  const auto& xs = c.breakpoints();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out.push_back({xs[i], xs[i], {kZero, c.values()[i]}, true});
    if (i + 1 < xs.size()) {
      out.push_back({xs[i], xs[i + 1], c.segments()[i], false});
    }
  }
  return out;
}

SplitExtractor::SplitExtractor(ValueCurve left, ValueCurve right,
                               ValueCurve combined)
    : left_(std::move(left)),
      right_(std::move(right)),
      combined_(std::move(combined)) {}

Rational SplitExtractor::SplitValue(const SplitChoice& s) const {
  Rational v;
  if (s.y.sign() > 0) v += s.y * left_.Eval(s.u);
  if (s.y < kOne) v += (kOne - s.y) * right_.Eval(s.v);
  return v;
}

std::vector<SplitChoice> SplitExtractor::OptimalSplits(
    const Rational& p) const {
  // The candidate family mirrors the pieces of DesignedCombine: stay on
  // either side (y = 1 or y = 0), or a chord between a left vertex a and a
  // right vertex b that straddle p.
  std::vector<SplitChoice> candidates = {{kOne, p, p}, {kZero, p, p}};
  for (const Rational& a : left_.breakpoints()) {
    for (const Rational& b : right_.breakpoints()) {
      if (a == b) continue;
      if (p < Min(a, b) || Max(a, b) < p) continue;
      Rational y = (p - b) / (a - b);
      if (y == kOne || y.is_zero()) continue;  // same as staying put
      candidates.push_back({std::move(y), a, b});
    }
  }
  Rational target = combined_.Eval(p);
  std::vector<SplitChoice> best;
  for (SplitChoice& c : candidates) {
    if (SplitValue(c) == target) best.push_back(std::move(c));
  }
  if (best.empty()) {
    throw ConsistencyError("no split attains the combined value at " +
                           p.ToString());
  }
  std::sort(best.begin(), best.end(),
            [](const SplitChoice& l, const SplitChoice& r) {
              if (l.y != r.y) return l.y > r.y;
              if (l.u != r.u) return l.u < r.u;
              return l.v < r.v;
            });
  best.erase(std::unique(best.begin(), best.end()), best.end());
  return best;
}

SplitChoice SplitExtractor::Choose(const Rational& p) const {
  return OptimalSplits(p).front();
}

CombineResult DesignedCombine(const ValueCurve& v_left,
                              const ValueCurve& v_right) {
  // Candidates: each child on its own, plus for every left vertex (a, A) and
  // right vertex (b, B) the chord between them on [min(a,b), max(a,b)].
  // Fixing one end of a split at a vertex, the objective along a linear piece
  // of the other child is linear-fractional in that end, so it peaks at a
  // piece endpoint (a vertex, whose value dominates the one-sided limit) or
  // at the degenerate split. Chords between vertices therefore suffice.
  std::vector<Piece> pieces = CurvePieces(v_left);
  std::vector<Piece> right = CurvePieces(v_right);
  pieces.insert(pieces.end(), right.begin(), right.end());
  const auto& lx = v_left.breakpoints();
  const auto& rx = v_right.breakpoints();
  for (std::size_t i = 0; i < lx.size(); ++i) {
    for (std::size_t j = 0; j < rx.size(); ++j) {
      if (lx[i] == rx[j]) continue;
      const Rational& a = lx[i];
      const Rational& b = rx[j];
      const Rational& va = v_left.values()[i];
      const Rational& vb = v_right.values()[j];
      Rational slope = (va - vb) / (a - b);
      pieces.push_back(
          {Min(a, b), Max(a, b), {slope, va - slope * a}, true});
    }
  }
  ValueCurve g = UpperEnvelope(pieces);
  return {g, SplitExtractor(v_left, v_right, g)};
}

ValueCurve DesignedCombineNary(const std::vector<ValueCurve>& children) {
  if (children.size() < 2) {
    throw ValidationError("designed combine needs at least two children");
  }
  ValueCurve acc = children.front();
  for (std::size_t k = 1; k < children.size(); ++k) {
    acc = DesignedCombine(acc, children[k]).curve;
  }
  return acc;
}

ValueCurve PointwiseMax(const ValueCurve& a, const ValueCurve& b) {
  std::vector<Piece> pieces = CurvePieces(a);
  std::vector<Piece> more = CurvePieces(b);
  pieces.insert(pieces.end(), more.begin(), more.end());
  return UpperEnvelope(pieces);
}

ValueCurve UpperConcaveEnvelope(const ValueCurve& a) {
  // Vertices carry the largest value the closure of the graph reaches there.
  std::vector<std::pair<Rational, Rational>> pts;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational v = a.values()[i];
    if (auto l = a.LeftLimit(i)) v = Max(v, *l);
    if (auto r = a.RightLimit(i)) v = Max(v, *r);
    pts.emplace_back(a.breakpoints()[i], std::move(v));
  }
  // Monotone chain, upper hull only; x is already increasing.
  std::vector<std::pair<Rational, Rational>> hull;
  for (auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& m = hull.back();
      Rational cross = (m.first - o.first) * (pt.second - o.second) -
                       (m.second - o.second) * (pt.first - o.first);
      if (cross.sign() < 0) break;
      hull.pop_back();
    }
    hull.push_back(std::move(pt));
  }
  return ValueCurve::Polyline(hull);
}

std::vector<CurveSample> Sample(const ValueCurve& a, int n) {
  if (n < 2) throw ValidationError("sample count must be at least 2");
  std::vector<CurveSample> out;
  for (int k = 0; k < n; ++k) {
    Rational p(k, n - 1);
    Rational v = a.Eval(p);
    std::optional<Rational> ratio;
    if (p.sign() > 0) {
      ratio = v / p;
    } else if (a.segments().front().intercept.is_zero()) {
      ratio = a.segments().front().slope;
    }
    out.push_back({std::move(p), std::move(v), std::move(ratio)});
  }
  return out;
}

std::vector<std::string> CheckCurveInvariants(const ValueCurve& a) {
  std::vector<std::string> problems;
  const auto& xs = a.breakpoints();
  auto bound = [](const Rational& p) { return Min(kOne, Rational(2) * p); };
  auto check_range = [&](const Rational& x, const Rational& v,
                         const char* what) {
    if (!v.in_unit_interval()) {
      problems.push_back(std::string(what) + " outside [0,1] at " +
                         x.ToString());
    }
    if (bound(x) < v) {
      problems.push_back(std::string(what) + " above min(1,2p) at " +
                         x.ToString());
    }
  };
  std::optional<Rational> prev;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Rational& v = a.values()[i];
    check_range(xs[i], v, "value");
    auto l = a.LeftLimit(i);
    auto r = a.RightLimit(i);
    if (l) check_range(xs[i], *l, "left limit");
    if (r) check_range(xs[i], *r, "right limit");
    if (l && r && v != Max(*l, *r)) {
      problems.push_back("breakpoint value is not the larger limit at " +
                         xs[i].ToString());
    }
    // Monotone: the walk left limit -> value -> right limit -> next left
    // limit never decreases (segments are monotone iff their slope is >= 0).
    if (l && prev && *l < *prev) {
      problems.push_back("decreasing before " + xs[i].ToString());
    }
    if (l && v < *l) problems.push_back("drop at " + xs[i].ToString());
    if (r && *r < v) problems.push_back("drop after " + xs[i].ToString());
    prev = r;
  }
  return problems;
}

}  // namespace persuasion
