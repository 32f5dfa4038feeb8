#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wrangle {

/// CSV formatting parameters. An empty optional is the "none" sentinel.
struct Dialect {
  std::optional<char> delimiter = ',';
  std::optional<char> quote = '"';
  std::optional<char> escape;

  static Dialect rfc4180() { return Dialect{}; }

  /// delimiter, quote and escape are pairwise distinct where present.
  bool well_formed() const;

  auto operator<=>(const Dialect&) const = default;
};

/// `delimiter=<c> quote=<c> escape=<c>` with controls spelled \t, \n and the
/// sentinel spelled `none`.
std::string to_string(const Dialect& dialect);
Dialect parse_dialect(std::string_view text);

using Rows = std::vector<std::vector<std::string>>;

/// Stateful split honouring quote and escape characters. A quote only opens
/// a quoted section at the start of a field; a doubled quote inside a quoted
/// section is a literal quote; the escape character makes the next character
/// literal. Blank lines are skipped and an unterminated quote runs to the end
/// of the text. With no delimiter every line is one cell.
Rows parse_with_dialect(std::string_view text, const Dialect& dialect);

/// First `max_lines` physical lines of `text` (all of it when 0).
std::string_view head_lines(std::string_view text, std::size_t max_lines);

/// Canonical RFC 4180 field: quoted only when it contains a comma, quote,
/// CR or LF.
std::string csv_field(std::string_view cell);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace wrangle
