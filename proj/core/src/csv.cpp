#include "wrangle/csv.hpp"

#include <fstream>
#include <sstream>

#include "wrangle/encoding.hpp"
#include "wrangle/error.hpp"

namespace wrangle {

bool Dialect::well_formed() const {
  auto clash = [](std::optional<char> a, std::optional<char> b) { return a && b && *a == *b; };
  return !clash(delimiter, quote) && !clash(delimiter, escape) && !clash(quote, escape);
}

std::string to_string(const Dialect& dialect) {
  return "delimiter=" + spell_char(dialect.delimiter) + " quote=" + spell_char(dialect.quote) +
         " escape=" + spell_char(dialect.escape);
}

Dialect parse_dialect(std::string_view text) {
  Dialect dialect;
  bool seen[3] = {false, false, false};
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (pos >= text.size()) break;
    auto eq = text.find('=', pos);
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::parse_error, "bad dialect '" + std::string(text) + "'");
    auto key = text.substr(pos, eq - pos);
    // A value is a single character (which may itself be a space), a
    // two-character control spelling, or "none".
    std::size_t end = eq + 1;
    if (text.substr(end, 4) == "none") {
      end += 4;
    } else if (end < text.size() && text[end] == '\\' && end + 1 < text.size() &&
               (text[end + 1] == 't' || text[end + 1] == 'n' || text[end + 1] == 'r')) {
      end += 2;
    } else {
      end += 1;
    }
    if (end > text.size())
      throw Error(ErrorCode::parse_error, "bad dialect '" + std::string(text) + "'");
    auto value = parse_spelled_char(text.substr(eq + 1, end - eq - 1));
    if (key == "delimiter") {
      dialect.delimiter = value;
      seen[0] = true;
    } else if (key == "quote") {
      dialect.quote = value;
      seen[1] = true;
    } else if (key == "escape") {
      dialect.escape = value;
      seen[2] = true;
    } else {
      throw Error(ErrorCode::parse_error, "unknown dialect field '" + std::string(key) + "'");
    }
    pos = end;
  }
  if (!seen[0] || !seen[1] || !seen[2])
    throw Error(ErrorCode::parse_error, "dialect needs delimiter, quote and escape: '" +
                                            std::string(text) + "'");
  return dialect;
}

Rows parse_with_dialect(std::string_view text, const Dialect& dialect) {
  Rows rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool line_has_chars = false;
  const std::size_t n = text.size();

  auto end_row = [&] {
    if (line_has_chars) {
      row.push_back(std::move(field));
      rows.push_back(std::move(row));
    }
    row.clear();
    field.clear();
    field_started = false;
    line_has_chars = false;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (dialect.escape && c == *dialect.escape && i + 1 < n) {
        field += text[++i];
      } else if (c == *dialect.quote) {
        if (i + 1 < n && text[i + 1] == c) {
          field += c;
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < n && text[i + 1] == '\n') ++i;
      end_row();
      continue;
    }
    line_has_chars = true;
    if (dialect.escape && c == *dialect.escape && i + 1 < n && text[i + 1] != '\n' &&
        text[i + 1] != '\r') {
      field += text[++i];
      field_started = true;
    } else if (dialect.quote && c == *dialect.quote && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (dialect.delimiter && c == *dialect.delimiter) {
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes) line_has_chars = true;
  end_row();
  return rows;
}

std::string_view head_lines(std::string_view text, std::size_t max_lines) {
  if (max_lines == 0) return text;
  std::size_t lines = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\n' && ++lines == max_lines) return text.substr(0, i + 1);
  }
  return text;
}

std::string csv_field(std::string_view cell) {
  if (cell.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(cell);
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::io_error, "write failed for " + path);
}

}  // namespace wrangle
