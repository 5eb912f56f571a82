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

#ifndef PERSUASION_RATIONAL_H_
#define PERSUASION_RATIONAL_H_

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace persuasion {

// Exact fraction in lowest terms with a positive denominator. Every
// probability, belief and utility in the library is one of these.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n);  // NOLINT(runtime/explicit)
  Rational(std::int64_t n, std::int64_t d);
  explicit Rational(mpq_class value);

  // Accepts an optionally signed "a/b" (b > 0) or decimal literal with at
  // most 12 fractional digits. Throws std::invalid_argument otherwise.
  static Rational Parse(std::string_view text);

  // Always "a/b", e.g. "1/1", "0/1", "2/3".
  std::string ToString() const;
  // Shortest round-trip form of the nearest double; display only.
  std::string ToDecimal() const;
  // Nearest double.
  double ToDouble() const;

  const mpz_class& num() const { return value_.get_num(); }
  const mpz_class& den() const { return value_.get_den(); }
  const mpq_class& get() const { return value_; }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool in_unit_interval() const { return sign() >= 0 && value_ <= 1; }

  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  // Throws std::domain_error on division by zero.
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }

 private:
  mpq_class value_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

inline const Rational& Min(const Rational& a, const Rational& b) {
  return b < a ? b : a;
}
inline const Rational& Max(const Rational& a, const Rational& b) {
  return a < b ? b : a;
}

}  // namespace persuasion

#endif  // PERSUASION_RATIONAL_H_
