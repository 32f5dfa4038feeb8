#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wrangle/assistant.hpp"

namespace wrangle::wire {

enum class Command { best, choices, apply };
std::string_view to_string(Command command);
/// Throws parse_error.
Command parse_command(std::string_view text);

/// Three lines: `slot=path,...`, the command, and H joined by '/'.
struct Request {
  Bindings bindings;
  Command command = Command::choices;
  InteractionSet h;

  bool operator==(const Request&) const = default;
};

/// `reference=/temp/bb15nice.csv,input=/temp/bb14.csv`. '%', ',' and '='
/// inside keys or paths are percent-escaped.
std::string encode_bindings(const Bindings& bindings);
Bindings decode_bindings(std::string_view line);

std::vector<std::string> encode_request(const Request& request);
/// Expects exactly three lines. Throws parse_error.
Request decode_request(const std::vector<std::string>& lines);

/// Label/interaction pairs followed by a blank line.
std::vector<std::string> encode_choices_response(const std::vector<Choice>& choices);
/// Accepts the lines with or without the trailing blank.
std::vector<Choice> decode_choices_response(const std::vector<std::string>& lines);

/// Script lines followed by a blank line.
std::vector<std::string> encode_best_response(const Expression& expression);

struct ProcessOptions {
  Options options;
  /// Directory for `apply` outputs; the system temp directory when empty.
  std::string out_dir;
};

/// Serves requests until end of input. A malformed or failing request
/// yields `error: <message>` and a blank line; the loop then continues.
/// Blank lines between requests are skipped. Returns the number of
/// requests answered.
std::size_t run_process_loop(const Assistant& assistant, std::istream& in, std::ostream& out,
                             const ProcessOptions& options = {});

}  // namespace wrangle::wire
