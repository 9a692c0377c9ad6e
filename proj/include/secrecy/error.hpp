#pragma once

#include <stdexcept>
#include <string>

namespace secrecy {

/// Argument outside the mathematical domain of an operation, or a record
/// invariant violated at construction.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical procedure failed to deliver a trustworthy result
/// (iteration cap, non-finite intermediate, out-of-range probability).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace secrecy
