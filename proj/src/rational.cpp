#include "polycert/rational.hpp"

#include <cmath>
#include <limits>

namespace polycert {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite double");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| in [0.5, 1)
  // 53 doublings make the mantissa integral.
  BigInt num(static_cast<long long>(std::ldexp(mant, 53)));
  exp -= 53;
  Rational r(num);
  if (exp > 0) {
    r *= Rational(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= Rational(BigInt(1) << (-exp));
  }
  return r;
}

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

std::string rational_to_string(const Rational& q) { return q.str(); }

Rational rationalize(double x, std::uint64_t max_den) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite double");
  bool neg = x < 0;
  double v = neg ? -x : x;
  // Continued fraction expansion with convergent denominators capped.
  std::uint64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(frac);
    if (fl > 9e18) break;
    std::uint64_t a = static_cast<std::uint64_t>(fl);
    if (q1 > 0 && a > (max_den - q0) / q1) break;
    std::uint64_t p2 = a * p1 + p0;
    std::uint64_t q2 = a * q1 + q0;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double rem = frac - fl;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  Rational r(BigInt(p1), BigInt(q1 == 0 ? 1 : q1));
  return neg ? -r : r;
}

unsigned bitsize(const BigInt& n) {
  BigInt a = n < 0 ? BigInt(-n) : n;
  unsigned bits = 0;
  while (a > 0) {
    ++bits;
    a >>= 1;
  }
  return bits;
}

}  // namespace polycert
