#pragma once

#include <stdexcept>
#include <string>

namespace hadeq {

/// Raised when an argument violates an operation's precondition
/// (mismatched spaces, out-of-range parameters, malformed descriptors).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace hadeq
