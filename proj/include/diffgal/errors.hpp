#pragma once

#include <stdexcept>
#include <string>

namespace diffgal {

// Malformed text or JSON input. `where` is a JSON pointer or a character offset.
struct ParseError : std::runtime_error {
  std::string where;
  explicit ParseError(const std::string& msg, std::string w = "")
      : std::runtime_error(msg), where(std::move(w)) {}
};

// Input is well formed but violates a mathematical precondition.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The requested computation is outside what is implemented.
struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An enumeration would exceed its configured size guard.
struct GuardExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace diffgal
