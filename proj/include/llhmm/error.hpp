#pragma once

#include <stdexcept>
#include <string>

namespace llhmm {

enum class ErrorCode {
  Parameter,
  NonConverged,
  MacroNonConverged,
  DegenerateInterpolant,
  WindowOutOfRange,
  NonPositiveData,
  Parse,
  Validation,
};

const char* to_string(ErrorCode code);

/// Base for every error raised by the library. `code()` identifies the
/// failure class; `index()` carries a step or cell index when one applies.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, long index = -1)
      : std::runtime_error(what), code_(code), index_(index) {}

  [[nodiscard]] ErrorCode code() const { return code_; }
  [[nodiscard]] long index() const { return index_; }

 private:
  ErrorCode code_;
  long index_;
};

[[noreturn]] void throw_parameter(const std::string& what);

}  // namespace llhmm
