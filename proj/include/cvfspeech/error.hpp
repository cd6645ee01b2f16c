#pragma once

#include <stdexcept>
#include <string>

namespace cvf {

/// Error category, mapped onto CLI exit codes (validation -> 1, io -> 2).
enum class ErrorKind { validation, io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error validation_error(const std::string& msg) {
  return Error(ErrorKind::validation, msg);
}

inline Error io_error(const std::string& msg) {
  return Error(ErrorKind::io, msg);
}

}  // namespace cvf
