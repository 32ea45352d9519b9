#include "hfactor/common.hpp"

#include <cmath>
#include <limits>

namespace hfactor {

BigInt factorial(unsigned n) {
  BigInt result = 1;
  for (unsigned i = 2; i <= n; ++i) result *= i;
  return result;
}

BigInt falling_factorial(std::uint64_t n, unsigned k) {
  if (k > n) return 0;
  BigInt result = 1;
  for (unsigned i = 0; i < k; ++i) result *= (n - i);
  return result;
}

BigInt binomial(std::uint64_t n, unsigned k) {
  if (k > n) return 0;
  return falling_factorial(n, k) / factorial(k);
}

double log_of(const BigInt& value) {
  if (value < 0) throw Error("log of a negative integer");
  if (value == 0) return -std::numeric_limits<double>::infinity();
  // Keep the top 64 significant bits and add back the shifted exponent.
  const std::size_t bits = boost::multiprecision::msb(value) + 1;
  if (bits <= 1000) return std::log(value.convert_to<double>());
  const std::size_t shift = bits - 64;
  const BigInt top = value >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

double log_of(const Rational& value) {
  if (value < 0) throw Error("log of a negative rational");
  if (value == 0) return -std::numeric_limits<double>::infinity();
  return log_of(boost::multiprecision::numerator(value)) -
         log_of(boost::multiprecision::denominator(value));
}

double to_double(const Rational& value) {
  return value.convert_to<double>();
}

std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_string(const BigInt& value) { return value.str(); }

}  // namespace hfactor
