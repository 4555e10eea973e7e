#include "graphvar/rational.hpp"

#include <charconv>
#include <cstdlib>
#include <limits>

namespace graphvar {

namespace {

using I128 = __int128;

I128 abs128(I128 v) { return v < 0 ? -v : v; }

I128 gcd128(I128 a, I128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    I128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long long narrow(I128 v) {
  if (v > std::numeric_limits<long long>::max() ||
      v < std::numeric_limits<long long>::min())
    throw Error("rational overflow: value does not fit in 64 bits");
  return static_cast<long long>(v);
}

long long parse_ll(const std::string& s) {
  long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw Error("cannot parse integer '" + s + "'");
  return v;
}

}  // namespace

Rational::Rational(long long num, long long den) {
  if (den == 0) throw Error("rational with zero denominator");
  I128 n = num, d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  I128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = narrow(n);
  den_ = narrow(d);
}

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw Error("empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    if (text.find('/', slash + 1) != std::string::npos ||
        text.find('.') != std::string::npos)
      throw Error("cannot parse rational '" + text + "'");
    return Rational(parse_ll(text.substr(0, slash)), parse_ll(text.substr(slash + 1)));
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(parse_ll(text));
  std::string head = text.substr(0, dot);
  std::string frac = text.substr(dot + 1);
  if (frac.empty()) throw Error("cannot parse rational '" + text + "'");
  bool neg = !head.empty() && head[0] == '-';
  std::string digits = (head == "-" || head.empty() || head == "+")
                           ? frac
                           : (neg ? head.substr(1) : (head[0] == '+' ? head.substr(1) : head)) + frac;
  long long num = parse_ll(digits);
  I128 den = 1;
  for (size_t i = 0; i < frac.size(); ++i) {
    den *= 10;
    if (den > std::numeric_limits<long long>::max())
      throw Error("rational overflow: too many decimal digits in '" + text + "'");
  }
  return Rational(neg ? -num : num, narrow(den));
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = narrow(-static_cast<I128>(num_));
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  I128 n = static_cast<I128>(num_) * o.den_ + static_cast<I128>(o.num_) * den_;
  I128 d = static_cast<I128>(den_) * o.den_;
  I128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = narrow(n);
  den_ = narrow(d);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  I128 n = static_cast<I128>(num_) * o.num_;
  I128 d = static_cast<I128>(den_) * o.den_;
  I128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = narrow(n);
  den_ = narrow(d);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw Error("rational division by zero");
  I128 n = static_cast<I128>(num_) * o.den_;
  I128 d = static_cast<I128>(den_) * o.num_;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  I128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = narrow(n);
  den_ = narrow(d);
  return *this;
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
  I128 lhs = static_cast<I128>(num_) * o.den_;
  I128 rhs = static_cast<I128>(o.num_) * den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Rational::pow(long long e) const {
  if (num_ == 0 && e <= 0) throw Error("rational pow: zero base with nonpositive exponent");
  Rational base = *this;
  if (e < 0) {
    base = Rational(1) / base;
    e = -e;
  }
  Rational acc(1);
  while (e > 0) {
    if (e & 1) acc *= base;
    base = (e >>= 1) > 0 ? base * base : base;
  }
  return acc;
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational min(const Rational& a, const Rational& b) { return a <= b ? a : b; }
Rational max(const Rational& a, const Rational& b) { return a >= b ? a : b; }

long long require_integer(const Rational& r, const std::string& label) {
  if (!r.is_integer())
    throw Error("exact mode needs an integer exponent for " + label + ", got " + r.str() +
                "; rerun without --rational");
  return r.num();
}

}  // namespace graphvar
