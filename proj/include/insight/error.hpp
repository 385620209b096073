#pragma once

#include <stdexcept>
#include <string>

namespace insight {

/// Failure categories. The CLI maps them onto process exit codes.
enum class ErrorKind {
  Internal,      // exit 1
  InvalidInput,  // exit 2
  InputNotFound, // exit 2
  Config,        // exit 2
  Parse,         // exit 2
  NotFound,      // exit 2
  InvalidTarget, // exit 2
  MissingIndex,  // exit 3
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Internal:
      return 1;
    case ErrorKind::MissingIndex:
      return 3;
    default:
      return 2;
  }
}

}  // namespace insight
