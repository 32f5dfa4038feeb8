#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wrangle {

enum class ErrorCode {
  invalid_argument,
  parse_error,
  io_error,
  unknown_assistant,
  missing_binding,
  conflicting_constraints,
  exhausted_constraints,
  no_recommendation,
  stale_choice,
  out_of_range,
  session_closed,
  not_found,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wrangle
