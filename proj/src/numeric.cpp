#include "sofic/numeric.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <vector>

#include "sofic/errors.hpp"

namespace sofic {

namespace {

std::mutex factorial_mutex;
std::vector<BigInt>& factorial_table() {
  static std::vector<BigInt> table{BigInt(1)};
  return table;
}

unsigned initial_precision() {
  if (const char* env = std::getenv("SOFIC_LAB_PRECISION")) {
    char* end = nullptr;
    const long bits = std::strtol(env, &end, 10);
    if (end != env && bits >= 53 && bits <= 100000) {
      return static_cast<unsigned>(bits);
    }
  }
  return 128;
}

std::atomic<unsigned>& precision_bits() {
  static std::atomic<unsigned> bits{initial_precision()};
  return bits;
}

unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

}  // namespace

BigInt factorial(unsigned n) {
  std::lock_guard lock(factorial_mutex);
  auto& table = factorial_table();
  while (table.size() <= n) {
    table.push_back(table.back() * static_cast<unsigned>(table.size()));
  }
  return table[n];
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  BigInt result = 1;
  k = std::min(k, n - k);
  for (unsigned i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

BigInt ipow(const BigInt& base, unsigned exponent) {
  return boost::multiprecision::pow(base, exponent);
}

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InputError("zero denominator");
  return Rational(BigInt(num), BigInt(den));
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw InputError("empty number");
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt num(text.substr(0, slash));
      BigInt den(text.substr(slash + 1));
      if (den == 0) throw InputError("zero denominator in '" + text + "'");
      return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t scale = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+") {
      throw InputError("malformed number '" + text + "'");
    }
    return Rational(BigInt(digits), ipow(BigInt(10), static_cast<unsigned>(scale)));
  } catch (const std::runtime_error&) {
    throw InputError("malformed number '" + text + "'");
  }
}

std::string to_string(const BigInt& value) { return value.str(); }

std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_string(const Real& value, int digits) {
  std::ostringstream out;
  out.precision(digits);
  out << value;
  return out.str();
}

unsigned working_precision_bits() { return precision_bits().load(); }

void set_working_precision_bits(unsigned bits) {
  if (bits < 53) throw InputError("working precision must be at least 53 bits");
  precision_bits().store(bits);
}

PrecisionScope::PrecisionScope() : PrecisionScope(working_precision_bits()) {}

PrecisionScope::PrecisionScope(unsigned bits)
    : saved_digits10_(Real::default_precision()) {
  Real::default_precision(digits10_for_bits(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

}  // namespace sofic
