#pragma once

#include <stdexcept>
#include <string>

namespace jitq {

// Raised when an input violates a domain invariant or an operation
// precondition. The CLI maps it to exit status 2.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for unreadable or unwritable files. The CLI maps it to exit status 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jitq
