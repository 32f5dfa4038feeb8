#include "wrangle/wire.hpp"

#include <filesystem>
#include <istream>
#include <memory>
#include <ostream>

#include "wrangle/encoding.hpp"
#include "wrangle/error.hpp"

namespace wrangle::wire {

namespace {

// Paths keep their slashes, so only the separators are escaped.
std::string escape_field(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '%' || c == ',' || c == '=' || c == '\n' || c == '\r') {
      static constexpr char hex[] = "0123456789ABCDEF";
      auto byte = static_cast<unsigned char>(c);
      out += '%';
      out += hex[byte >> 4];
      out += hex[byte & 0xF];
    } else {
      out += c;
    }
  }
  return out;
}

void write_lines(std::ostream& out, const std::vector<std::string>& lines) {
  for (const auto& line : lines) out << line << '\n';
  out.flush();
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::best: return "best";
    case Command::choices: return "choices";
    case Command::apply: return "apply";
  }
  return "choices";
}

Command parse_command(std::string_view text) {
  auto t = trim(text);
  if (t == "best") return Command::best;
  if (t == "choices") return Command::choices;
  if (t == "apply") return Command::apply;
  throw Error(ErrorCode::parse_error, "unknown command '" + std::string(text) + "'");
}

std::string encode_bindings(const Bindings& bindings) {
  std::string out;
  for (const auto& [slot, path] : bindings.entries()) {
    if (!out.empty()) out += ',';
    out += escape_field(slot) + "=" + escape_field(path);
  }
  return out;
}

Bindings decode_bindings(std::string_view line) {
  Bindings out;
  if (trim(line).empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    auto pair = line.substr(start, comma - start);
    auto eq = pair.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw Error(ErrorCode::parse_error, "expected slot=path in '" + std::string(pair) + "'");
    auto slot = percent_unescape(pair.substr(0, eq));
    if (out.find(slot)) throw Error(ErrorCode::parse_error, "slot '" + slot + "' bound twice");
    out.set(slot, percent_unescape(pair.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string> encode_request(const Request& request) {
  return {encode_bindings(request.bindings), std::string(to_string(request.command)), request.h.encode()};
}

Request decode_request(const std::vector<std::string>& lines) {
  if (lines.size() != 3)
    throw Error(ErrorCode::parse_error, "a request has 3 lines, got " + std::to_string(lines.size()));
  Request r;
  r.bindings = decode_bindings(lines[0]);
  r.command = parse_command(lines[1]);
  r.h = InteractionSet::decode(trim(lines[2]));
  return r;
}

std::vector<std::string> encode_choices_response(const std::vector<Choice>& choices) {
  std::vector<std::string> out;
  for (const auto& c : choices) {
    if (c.label.find_first_of("\r\n") != std::string::npos)
      throw Error(ErrorCode::invalid_argument, "choice label contains a newline");
    out.push_back(c.label);
    out.push_back(c.next.encode());
  }
  out.emplace_back();
  return out;
}

std::vector<Choice> decode_choices_response(const std::vector<std::string>& lines) {
  std::size_t n = lines.size();
  if (n > 0 && lines.back().empty() && n % 2 == 1) --n;
  if (n % 2 != 0) throw Error(ErrorCode::parse_error, "choices come in label/interaction pairs");
  std::vector<Choice> out;
  for (std::size_t i = 0; i < n; i += 2) out.push_back({lines[i], InteractionSet::decode(lines[i + 1])});
  return out;
}

std::vector<std::string> encode_best_response(const Expression& expression) {
  std::vector<std::string> out;
  for (const auto& line : expression.script) {
    if (line.empty() || line.find_first_of("\r\n") != std::string::npos)
      throw Error(ErrorCode::invalid_argument, "script lines must be non-empty single lines");
    out.push_back(line);
  }
  out.emplace_back();
  return out;
}

std::size_t run_process_loop(const Assistant& assistant, std::istream& in, std::ostream& out,
                             const ProcessOptions& options) {
  std::unique_ptr<BoundAssistant> bound;
  Bindings bound_to;
  std::size_t answered = 0;
  const std::filesystem::path out_dir =
      options.out_dir.empty() ? std::filesystem::temp_directory_path() : std::filesystem::path(options.out_dir);

  std::string line;
  while (read_line(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> lines{line};
    while (lines.size() < 3 && read_line(in, line)) lines.push_back(line);
    ++answered;
    try {
      Request request = decode_request(lines);
      if (!bound || !(request.bindings == bound_to)) {
        bound.reset();
        bound = assistant.bind(request.bindings, options.options);
        bound_to = request.bindings;
      }
      switch (request.command) {
        case Command::choices:
          write_lines(out, encode_choices_response(bound->choices(request.h)));
          break;
        case Command::best:
          write_lines(out, encode_best_response(bound->best(request.h)));
          break;
        case Command::apply: {
          auto expression = bound->best(request.h);
          auto table = bound->apply(expression);
          std::filesystem::create_directories(out_dir);
          auto path = out_dir / (assistant.descriptor().id + "-" + std::to_string(answered) + ".csv");
          write_csv(table, path.string());
          write_lines(out, {path.string(), ""});
          break;
        }
      }
    } catch (const std::exception& e) {
      std::string message = e.what();
      for (auto& c : message)
        if (c == '\n' || c == '\r') c = ' ';
      write_lines(out, {"error: " + message, ""});
    }
    if (!out) throw Error(ErrorCode::io_error, "cannot write response");
  }
  return answered;
}

}  // namespace wrangle::wire
