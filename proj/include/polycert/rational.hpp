#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace polycert {

// Exact arithmetic scalar used throughout the exact layer. GMP-backed, so
// coefficient growth in elimination and certificate replay stays cheap.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Exact conversion: every finite double is a dyadic rational.
Rational rational_from_double(double x);

// Parse "p/q" or "p" (optionally signed). Throws std::invalid_argument.
Rational parse_rational(const std::string& s);

std::string rational_to_string(const Rational& q);

// Nearest rational with denominator <= max_den (Stern-Brocot / continued
// fractions). Used to try to promote numeric SDP output to an exact witness.
Rational rationalize(double x, std::uint64_t max_den);

// Number of bits needed to write |n| (bit(0) = 0, bit(1) = 1, bit(2) = 2).
unsigned bitsize(const BigInt& n);

}  // namespace polycert
