#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hfactor {

using Vertex = std::uint32_t;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Bad input or a violated precondition. The CLI maps this to exit status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal identity that must hold exactly did not. The CLI maps this to
/// exit status 2.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

BigInt factorial(unsigned n);
BigInt falling_factorial(std::uint64_t n, unsigned k);
BigInt binomial(std::uint64_t n, unsigned k);

/// Natural log of a positive big integer; -inf for zero.
double log_of(const BigInt& value);

/// Natural log of a positive rational; -inf for zero.
double log_of(const Rational& value);

double to_double(const Rational& value);

/// "num/den", or just "num" when the denominator is 1.
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

}  // namespace hfactor
