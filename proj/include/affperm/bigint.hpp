#pragma once

// Exact integer and rational scalars used by every closed-form count.

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace affperm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt factorial(int n);

/// C(n, r), zero when r < 0 or r > n (and for n < 0).
BigInt binomial(int n, int r);

/// N! / (n_1! ... n_k!), zero if any part is negative or the parts do not sum to N.
BigInt multinomial(int total, const std::vector<int>& parts);

BigInt ipow(const BigInt& base, unsigned exponent);

std::string to_string(const BigInt& value);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

long double to_long_double(const BigInt& value);
long double to_long_double(const Rational& value);

/// Natural log of a positive integer. Works past the long double range.
long double log_of(const BigInt& value);

}  // namespace affperm
