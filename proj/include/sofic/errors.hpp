#pragma once

#include <stdexcept>
#include <string>

namespace sofic {

/// Malformed or inconsistent input (bad generator index, length mismatch, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but outside an operation's domain (infeasible type,
/// improper planted coloring, unsupported k, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exhaustive operation refused because the instance exceeds its oracle bound.
class ScaleError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A numerical routine failed to converge or violated an asserted identity.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sofic
