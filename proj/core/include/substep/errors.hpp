#pragma once

#include <stdexcept>
#include <string>

namespace substep {

/// Invalid input: parameters outside their admissible range, malformed
/// models, inconsistent dimensions. Maps to CLI exit code 1.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Failure of the numerics at runtime: singular factorization, root solver
/// out of budget, Newton nonconvergence, non-finite state. Maps to CLI exit
/// code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace substep
