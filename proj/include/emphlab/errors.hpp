#pragma once

#include <stdexcept>
#include <string>

namespace emphlab {

// Raised when a de-emphasis tap would make the IIR recursion unstable.
class InstabilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical invariant that must hold for valid inputs was violated.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed or unsupported file content.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace emphlab
