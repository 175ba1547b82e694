#pragma once

#include <stdexcept>
#include <string>

namespace ac {

/// Raised when an argument lies outside the mathematical domain of an operation
/// (quantum numbers out of range, t > N, p < 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an input state or channel fails a numerical validity check
/// (non-Hermitian, wrong trace, negative eigenvalues, dimension mismatch).
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& what, double min_eigenvalue = 0.0)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

}  // namespace ac
