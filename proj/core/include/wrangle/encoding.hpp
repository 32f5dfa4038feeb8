#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wrangle {

/// Percent-escapes '%', '/', CR and LF, plus every character in `extra`.
std::string percent_escape(std::string_view text, std::string_view extra = {});

/// Inverse of percent_escape; malformed sequences throw parse_error.
std::string percent_unescape(std::string_view text);

/// A constraint in call form: `name(arg1,arg2)`.
struct CallForm {
  std::string name;
  std::vector<std::string> args;

  bool operator==(const CallForm&) const = default;
};

/// Parses `name(args)`. The argument list is everything between the first
/// '(' and the final ')'. With arity 1 it is taken whole (commas allowed);
/// otherwise it is split on ',' into exactly `arity` parts. Arguments are
/// percent-unescaped.
CallForm parse_call(std::string_view text, std::size_t arity);

/// Name of the call without validating the arguments.
std::string call_name(std::string_view text);

/// Prints a call; commas inside arguments are escaped when there is more than
/// one argument so that parse_call(print_call(c), n) == c.
std::string print_call(const CallForm& call);

/// Joins/splits constraint texts with '/' as on the wire.
std::string join_constraints(const std::vector<std::string>& constraints);
std::vector<std::string> split_constraints(std::string_view line);

/// Spelling of a single dialect character: "none" for the sentinel, "\t",
/// "\n", "\r" for controls, otherwise the character itself.
std::string spell_char(std::optional<char> c);
std::optional<char> parse_spelled_char(std::string_view text);

std::string trim(std::string_view text);
std::string to_lower(std::string_view text);

}  // namespace wrangle
