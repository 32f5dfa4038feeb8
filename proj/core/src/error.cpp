#include "wrangle/error.hpp"

namespace wrangle {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::parse_error: return "parse error";
    case ErrorCode::io_error: return "i/o error";
    case ErrorCode::unknown_assistant: return "unknown assistant";
    case ErrorCode::missing_binding: return "missing binding";
    case ErrorCode::conflicting_constraints: return "conflicting constraints";
    case ErrorCode::exhausted_constraints: return "exhausted constraints";
    case ErrorCode::no_recommendation: return "no recommendation";
    case ErrorCode::stale_choice: return "stale choice";
    case ErrorCode::out_of_range: return "out of range";
    case ErrorCode::session_closed: return "session closed";
    case ErrorCode::not_found: return "not found";
  }
  return "error";
}

}  // namespace wrangle
