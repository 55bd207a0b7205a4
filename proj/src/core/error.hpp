#pragma once

#include <stdexcept>
#include <string>

namespace tw {

// Mirrors the tw_status values in include/tiltedwalk.h.
enum class ErrorCode : int {
  Ok = 0,
  Usage = 1,
  BallTooSmall = 2,
  SizeLimit = 3,
  Unsupported = 4,
  Io = 5,
  Diverged = 6,
  Internal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace tw
