#pragma once

#include <stdexcept>
#include <string>

namespace ffmu {

enum class ErrorKind {
  kInvalidArgument,
  kFieldMismatch,
  kParse,
  kTableTooSmall,
  kCountMismatch,
  kVersionMismatch,
  kDensityUndefined,
  kCeilingExceeded,
  kDomain,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ffmu
