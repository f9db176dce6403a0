#pragma once

#include <stdexcept>
#include <string>

namespace sbs {

enum class ErrorCode {
  InvalidArgument,
  GridMismatch,
  NotProjectable,
  InitFailed,
  NoBoxConvergence,
  TrivialState,
  WindowTooSmall,
  OutOfDomain,
  Config,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sbs
