#pragma once

#include <stdexcept>
#include <string>

namespace stabcoh {

// Exit codes used by the CLI; library code throws, the CLI maps.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitParse = 2,
  kExitPrecondition = 3,
  kExitTruncation = 4,
};

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text.  `position` is a 0-based offset into the input.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg + " at position " + std::to_string(position)), position(position) {}
  std::size_t position;
};

// Mixing scalars bound to different prime fields.
struct FieldMismatchError : Error {
  using Error::Error;
};

// Input outside the supported scope (regular ring, non-CI stable model, ...).
struct PreconditionError : Error {
  using Error::Error;
};

// The requested value cannot be certified within the degree/window bounds.
struct TruncationError : Error {
  using Error::Error;
};

// A consistency assertion failed (a cycle that isn't one, a lift that must
// exist but doesn't).  Always a bug or a truncation leak, never user error.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace stabcoh
