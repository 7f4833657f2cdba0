#include "affperm/bigint.hpp"

#include <cmath>
#include <numeric>

namespace affperm {

BigInt factorial(int n) {
  BigInt r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt binomial(int n, int r) {
  if (n < 0 || r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  BigInt out = 1;
  for (int i = 1; i <= r; ++i) {
    out *= n - r + i;
    out /= i;
  }
  return out;
}

BigInt multinomial(int total, const std::vector<int>& parts) {
  int remaining = total;
  BigInt out = 1;
  for (int p : parts) {
    if (p < 0 || p > remaining) return 0;
    out *= binomial(remaining, p);
    remaining -= p;
  }
  return remaining == 0 ? out : BigInt(0);
}

BigInt ipow(const BigInt& base, unsigned exponent) { return boost::multiprecision::pow(base, exponent); }

std::string to_string(const BigInt& value) { return value.str(); }

std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

long double to_long_double(const BigInt& value) { return value.convert_to<long double>(); }

long double to_long_double(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  return std::exp(log_of(abs(num)) - log_of(den)) * (num < 0 ? -1.0L : 1.0L);
}

long double log_of(const BigInt& value) {
  // Keep the leading 60 bits and account for the rest as a power of two.
  const unsigned bits = value == 0 ? 0 : static_cast<unsigned>(boost::multiprecision::msb(value)) + 1;
  if (bits <= 60) return std::log(value.convert_to<long double>());
  const unsigned shift = bits - 60;
  const BigInt top = value >> shift;
  return std::log(top.convert_to<long double>()) + static_cast<long double>(shift) * std::log(2.0L);
}

}  // namespace affperm
