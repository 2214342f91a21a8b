#pragma once

#include <stdexcept>
#include <string>

namespace fbmin {

/// Raised when an argument violates an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a numerical kernel cannot deliver a result within its budget.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fbmin
