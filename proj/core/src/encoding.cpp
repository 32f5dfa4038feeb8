#include "wrangle/encoding.hpp"

#include <algorithm>
#include <cctype>

#include "wrangle/error.hpp"

namespace wrangle {

namespace {

constexpr char kHex[] = "0123456789ABCDEF";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

std::string percent_escape(std::string_view text, std::string_view extra) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    bool escape = c == '%' || c == '/' || c == '\n' || c == '\r' ||
                  extra.find(c) != std::string_view::npos;
    if (escape) {
      auto byte = static_cast<unsigned char>(c);
      out.push_back('%');
      out.push_back(kHex[byte >> 4]);
      out.push_back(kHex[byte & 0xF]);
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string percent_unescape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out.push_back(text[i]);
      continue;
    }
    if (i + 2 >= text.size())
      throw Error(ErrorCode::parse_error, "truncated percent escape in '" + std::string(text) + "'");
    int hi = hex_value(text[i + 1]);
    int lo = hex_value(text[i + 2]);
    if (hi < 0 || lo < 0)
      throw Error(ErrorCode::parse_error, "bad percent escape in '" + std::string(text) + "'");
    out.push_back(static_cast<char>(hi * 16 + lo));
    i += 2;
  }
  return out;
}

CallForm parse_call(std::string_view text, std::size_t arity) {
  auto open = text.find('(');
  if (open == std::string_view::npos || open == 0 || text.empty() || text.back() != ')')
    throw Error(ErrorCode::parse_error, "expected name(args) but got '" + std::string(text) + "'");
  CallForm call;
  call.name = std::string(text.substr(0, open));
  for (char c : call.name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      throw Error(ErrorCode::parse_error, "bad constraint name '" + call.name + "'");
  }
  auto inner = text.substr(open + 1, text.size() - open - 2);
  if (arity == 1) {
    call.args.push_back(percent_unescape(inner));
    return call;
  }
  std::size_t start = 0;
  while (true) {
    auto comma = inner.find(',', start);
    call.args.push_back(percent_unescape(inner.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (call.args.size() != arity)
    throw Error(ErrorCode::parse_error, call.name + " takes " + std::to_string(arity) +
                                            " arguments: '" + std::string(text) + "'");
  return call;
}

std::string call_name(std::string_view text) {
  auto open = text.find('(');
  return std::string(text.substr(0, open));
}

std::string print_call(const CallForm& call) {
  std::string out = call.name + "(";
  const bool multi = call.args.size() > 1;
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    if (i > 0) out += ',';
    out += percent_escape(call.args[i], multi ? "," : "");
  }
  out += ')';
  return out;
}

std::string join_constraints(const std::vector<std::string>& constraints) {
  std::string out;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    if (i > 0) out += '/';
    out += constraints[i];
  }
  return out;
}

std::vector<std::string> split_constraints(std::string_view line) {
  std::vector<std::string> out;
  if (line.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto slash = line.find('/', start);
    auto piece = line.substr(start, slash - start);
    if (piece.empty())
      throw Error(ErrorCode::parse_error, "empty constraint in '" + std::string(line) + "'");
    out.emplace_back(piece);
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
  return out;
}

std::string spell_char(std::optional<char> c) {
  if (!c) return "none";
  switch (*c) {
    case '\t': return "\\t";
    case '\n': return "\\n";
    case '\r': return "\\r";
    default: return std::string(1, *c);
  }
}

std::optional<char> parse_spelled_char(std::string_view text) {
  if (text == "none") return std::nullopt;
  if (text == "\\t" || to_lower(text) == "tab") return '\t';
  if (text == "\\n") return '\n';
  if (text == "\\r") return '\r';
  if (text.size() == 1) return text[0];
  throw Error(ErrorCode::parse_error, "expected a single character or 'none', got '" +
                                          std::string(text) + "'");
}

std::string trim(std::string_view text) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  auto begin = std::find_if_not(text.begin(), text.end(), is_space);
  auto end = std::find_if_not(text.rbegin(), text.rend(), is_space).base();
  if (begin >= end) return {};
  return std::string(begin, end);
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace wrangle
