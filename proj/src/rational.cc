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

#include "persuasion/rational.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace persuasion {
namespace {

constexpr int kMaxFractionDigits = 12;

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void BadLiteral(std::string_view text, const char* why) {
  throw std::invalid_argument("invalid rational \"" + std::string(text) +
                              "\": " + why);
}

}  // namespace

Rational::Rational(std::int64_t n) : value_(static_cast<long>(n)) {}

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  value_ = mpq_class(mpz_class(static_cast<long>(n)),
                     mpz_class(static_cast<long>(d)));
  value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) {
  value_.canonicalize();
}

Rational Rational::Parse(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  mpq_class value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view n = s.substr(0, slash);
    std::string_view d = s.substr(slash + 1);
    if (!AllDigits(n) || !AllDigits(d)) BadLiteral(text, "expected a/b");
    mpz_class den(std::string(d), 10);
    if (den == 0) BadLiteral(text, "zero denominator");
    value = mpq_class(mpz_class(std::string(n), 10), den);
  } else {
    auto dot = s.find('.');
    std::string_view whole = s.substr(0, dot);
    std::string_view frac =
        dot == std::string_view::npos ? std::string_view() : s.substr(dot + 1);
    if (dot != std::string_view::npos && frac.empty()) {
      BadLiteral(text, "missing fractional digits");
    }
    if (whole.empty() && frac.empty()) BadLiteral(text, "empty literal");
    if (!whole.empty() && !AllDigits(whole)) BadLiteral(text, "not a number");
    if (!frac.empty() && !AllDigits(frac)) BadLiteral(text, "not a number");
    if (frac.size() > kMaxFractionDigits) {
      BadLiteral(text, "more than 12 fractional digits");
    }
    std::string digits = std::string(whole.empty() ? "0" : whole);
    digits += frac;
    mpz_class den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    value = mpq_class(mpz_class(digits, 10), den);
  }
  value.canonicalize();
  if (negative) value = -value;
  return Rational(std::move(value));
}

std::string Rational::ToString() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

double Rational::ToDouble() const {
  // get_d truncates toward zero; step outward if that neighbour is nearer.
  double d = value_.get_d();
  if (!std::isfinite(d)) return d;
  double out = std::nextafter(d, sign() < 0 ? -HUGE_VAL : HUGE_VAL);
  if (std::isfinite(out) && abs(mpq_class(out) - value_) <
                                abs(mpq_class(d) - value_)) {
    return out;
  }
  return d;
}

std::string Rational::ToDecimal() const {
  // Shortest text that reads back as the same double.
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), ToDouble());
  return std::string(buf, end);
}

Rational& Rational::operator+=(const Rational& o) {
  value_ += o.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  value_ -= o.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  value_ *= o.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  value_ /= o.value_;
  return *this;
}

Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.ToString();
}

}  // namespace persuasion
