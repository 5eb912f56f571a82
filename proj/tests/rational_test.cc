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
#include <cmath>
#include <string>

#include "doctest.h"
#include "persuasion/rational.h"
#include "test_util.h"

namespace persuasion {
namespace {

using testing::Q;

TEST_CASE("parse fractions and decimals") {
  CHECK(Q("2/3") == Rational(2, 3));
  CHECK(Q("4/6") == Rational(2, 3));
  CHECK(Q("0.8") == Rational(4, 5));
  CHECK(Q("0.08") == Rational(2, 25));
  CHECK(Q("1") == Rational(1));
  CHECK(Q(".5") == Rational(1, 2));
  CHECK(Q("-1/2") == Rational(-1, 2));
  CHECK(Q("0.000000000001") == Rational(1, 1000000000000LL));
}

TEST_CASE("parse rejects malformed text") {
  for (const char* bad : {"", "1/0", "1/-2", "a", "1/2/3", "0.1.2", "1e3",
                          "0.0000000000001", " 1/2"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Q(bad), std::invalid_argument);
  }
}

TEST_CASE("canonical text form") {
  CHECK(Rational(0).ToString() == "0/1");
  CHECK(Rational(1).ToString() == "1/1");
  CHECK(Rational(6, 9).ToString() == "2/3");
  CHECK(Rational(1, 2).ToDecimal() == "0.5");
  CHECK(Rational(1, 3).ToDouble() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("decimal text is the nearest double") {
  CHECK(Rational(8, 5).ToDecimal() == "1.6");
  CHECK(Rational(-8, 5).ToDecimal() == "-1.6");
  CHECK(Rational(1, 10).ToDecimal() == "0.1");
  CHECK(Rational(2, 3).ToDecimal() == "0.6666666666666666");
  // The text reads back as a double no farther from the exact value than
  // either neighbour.
  testing::Random rng(11);
  for (int i = 0; i < 500; ++i) {
    Rational x(rng.Int(-100000, 100000), rng.Int(1, 99999));
    double d = std::stod(x.ToDecimal());
    CHECK(d == x.ToDouble());
    mpq_class err = abs(mpq_class(d) - x.get());
    for (double n :
         {std::nextafter(d, -HUGE_VAL), std::nextafter(d, HUGE_VAL)}) {
      CHECK(abs(mpq_class(n) - x.get()) >= err);
    }
  }
}

TEST_CASE("field arithmetic round-trips exactly") {
  testing::Random rng(7);
  for (int i = 0; i < 500; ++i) {
    Rational a = rng.Unit(50), b = rng.OpenUnit(50);
    CHECK((a + b) - b == a);
    CHECK((a * b) / b == a);
    CHECK(-(-a) == a);
    CHECK(Rational::Parse(a.ToString()) == a);
    // Order agrees with cross-multiplied integers.
    CHECK((a < b) == (a.num() * b.den() < b.num() * a.den()));
  }
}

TEST_CASE("division by zero throws") {
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
}

TEST_CASE("min and max") {
  CHECK(Min(Q("1/3"), Q("1/2")) == Q("1/3"));
  CHECK(Max(Q("1/3"), Q("1/2")) == Q("1/2"));
}

}  // namespace
}  // namespace persuasion
