#pragma once

#include <stdexcept>
#include <string>

namespace mdframe {

enum class ErrorCode {
  NonCoprime,
  ScaleOutOfRange,
  DegenerateSetup,
  IndexOutOfRange,
  InvalidArgument,
  TooLarge,
  Singular,
  GridMisaligned,
  UnitarityViolated,
  DensityViolated,
  TailNotConverged,
  NotAFrame,
  NoMdDual,
  TruncationNotConverged,
  Parse,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mdframe
