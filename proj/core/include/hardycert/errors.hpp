#pragma once

#include <stdexcept>
#include <string>

namespace hardycert {

/// Argument outside the mathematical domain of an operation (x <= 0, a > b, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input violates a documented precondition (non-monotone weight, bad sequence, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operation called for the wrong exponent regime (e.g. the r < 1 criteria with r >= 1).
class RegimeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A constructed object would break a type invariant (e.g. a "weight" that is not one).
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hardycert
