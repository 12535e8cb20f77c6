#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace sofic {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::mpfr_float;

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);
BigInt ipow(const BigInt& base, unsigned exponent);

Rational make_rational(std::int64_t num, std::int64_t den);
/// Parses "p/q", an integer, or a decimal such as "0.25" (exactly).
Rational parse_rational(const std::string& text);
std::string to_string(const BigInt& value);
std::string to_string(const Rational& value);
std::string to_string(const Real& value, int digits = 25);

// Working precision for every analytic routine. The initial value comes from
// SOFIC_LAB_PRECISION (bits) and defaults to 128.
unsigned working_precision_bits();
void set_working_precision_bits(unsigned bits);

/// Sets the mpfr default precision of the calling thread to the working
/// precision for the lifetime of the object.
class PrecisionScope {
 public:
  PrecisionScope();
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits10_;
};

}  // namespace sofic
