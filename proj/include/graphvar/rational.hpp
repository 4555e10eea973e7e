#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "graphvar/graph.hpp"

namespace graphvar {

// Exact rational arithmetic on 64-bit numerator/denominator, used by the
// --rational hypothesis checker. Intermediates go through 128-bit integers;
// anything that cannot be reduced back into 64 bits throws instead of
// silently overflowing.
class Rational {
 public:
  Rational() = default;
  Rational(long long num, long long den = 1);

  // Accepts "a/b", plain integers, and finite decimals such as "-0.25".
  static Rational parse(const std::string& text);

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  bool operator==(const Rational& o) const = default;
  std::strong_ordering operator<=>(const Rational& o) const;

  // Integer powers, negative exponents invert. 0^e with e <= 0 throws.
  Rational pow(long long e) const;

  double to_double() const;
  // "num/den", or just "num" when the denominator is 1.
  std::string str() const;

 private:
  long long num_ = 0;
  long long den_ = 1;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

// Throws unless r is an integer; returns it as long long. The label names the
// offending exponent in the error message.
long long require_integer(const Rational& r, const std::string& label);

}  // namespace graphvar
