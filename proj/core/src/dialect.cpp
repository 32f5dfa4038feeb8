#include "wrangle/dialect.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

#include "wrangle/encoding.hpp"
#include "wrangle/error.hpp"
#include "wrangle/table.hpp"

namespace wrangle::dialect {

namespace {

bool all_digits(std::string_view s, std::size_t min_len, std::size_t max_len) {
  if (s.size() < min_len || s.size() > max_len) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::vector<std::string_view> split_any(std::string_view s, std::string_view seps) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find_first_of(seps, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool is_date(std::string_view s) {
  for (char sep : {'-', '/', '.'}) {
    if (std::count(s.begin(), s.end(), sep) != 2) continue;
    auto parts = split_any(s, std::string_view(&sep, 1));
    if (parts.size() != 3) continue;
    if (all_digits(parts[0], 4, 4) && all_digits(parts[1], 1, 2) && all_digits(parts[2], 1, 2))
      return true;
    if (all_digits(parts[0], 1, 2) && all_digits(parts[1], 1, 2) &&
        (all_digits(parts[2], 2, 2) || all_digits(parts[2], 4, 4)))
      return true;
  }
  return false;
}

bool is_time(std::string_view s) {
  std::string lower = to_lower(s);
  std::string_view core = lower;
  for (std::string_view suffix : {" am", " pm", "am", "pm"}) {
    if (core.size() > suffix.size() && core.ends_with(suffix)) {
      core.remove_suffix(suffix.size());
      break;
    }
  }
  auto parts = split_any(core, ":");
  if (parts.size() < 2 || parts.size() > 3) return false;
  if (!all_digits(parts[0], 1, 2)) return false;
  for (std::size_t k = 1; k < parts.size(); ++k)
    if (!all_digits(parts[k], 2, 2)) return false;
  return true;
}

bool is_url(std::string_view s) {
  if (s.find(' ') != std::string_view::npos) return false;
  for (std::string_view prefix : {"http://", "https://", "ftp://", "www."})
    if (s.size() > prefix.size() && s.starts_with(prefix)) return true;
  return false;
}

bool is_email(std::string_view s) {
  auto at = s.find('@');
  if (at == std::string_view::npos || at == 0 || s.find('@', at + 1) != std::string_view::npos)
    return false;
  if (s.find(' ') != std::string_view::npos) return false;
  auto domain = s.substr(at + 1);
  auto dot = domain.find('.');
  return dot != std::string_view::npos && dot > 0 && dot + 1 < domain.size();
}

bool is_token(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

int delimiter_rank(std::optional<char> c) {
  if (!c) return 1000;
  switch (*c) {
    case ',': return 0;
    case '\t': return 1;
    case ';': return 2;
    case '|': return 3;
    default: return 4 + static_cast<unsigned char>(*c);
  }
}

int quote_rank(std::optional<char> c) {
  if (!c) return 1;
  if (*c == '"') return 0;
  if (*c == '\'') return 2;
  return 3 + static_cast<unsigned char>(*c);
}

int escape_rank(std::optional<char> c) { return c ? 1 + static_cast<unsigned char>(*c) : 0; }

std::optional<char>& component(Dialect& d, Slot s) {
  return s == Slot::delimiter ? d.delimiter : s == Slot::quote ? d.quote : d.escape;
}

std::optional<char> component(const Dialect& d, Slot s) {
  return s == Slot::delimiter ? d.delimiter : s == Slot::quote ? d.quote : d.escape;
}

constexpr std::array<Slot, 3> kSlots = {Slot::delimiter, Slot::quote, Slot::escape};

std::string display(std::optional<char> c) { return "'" + spell_char(c) + "'"; }

std::string fix_label(Slot s, std::optional<char> c) {
  if (!c) return "Use no " + std::string(to_string(s));
  return "Use " + display(c) + " as the " + std::string(to_string(s));
}

std::string not_label(Slot s, std::optional<char> c) {
  if (!c) return "Require a " + std::string(to_string(s));
  return "Don't use " + display(c) + " as the " + std::string(to_string(s));
}

std::string slot_suffix(Slot s) {
  return s == Slot::delimiter ? "delimiter" : s == Slot::quote ? "quote" : "escape";
}

}  // namespace

std::string_view to_string(Slot slot) {
  switch (slot) {
    case Slot::delimiter: return "delimiter";
    case Slot::quote: return "quote character";
    case Slot::escape: return "escape character";
  }
  return "delimiter";
}

double pattern_score(const Rows& rows) {
  std::map<std::size_t, std::size_t> groups;
  for (const auto& row : rows) ++groups[row.size()];
  if (groups.empty()) return 0.0;
  double sum = 0.0;
  for (auto [width, count] : groups)
    sum += static_cast<double>(count) * static_cast<double>(width - 1) / static_cast<double>(width);
  return sum / static_cast<double>(groups.size());
}

bool is_typed_cell(std::string_view cell) {
  std::string s = trim(cell);
  if (s.empty()) return true;
  return parse_real(s).has_value() || is_date(s) || is_time(s) || is_url(s) || is_email(s) ||
         is_token(s);
}

double type_score(const Rows& rows) {
  std::size_t total = 0, typed = 0;
  for (const auto& row : rows) {
    for (const auto& cell : row) {
      ++total;
      if (is_typed_cell(cell)) ++typed;
    }
  }
  if (total == 0) return kTypeScoreFloor;
  return std::max(kTypeScoreFloor, static_cast<double>(typed) / static_cast<double>(total));
}

ScoredDialect score_dialect(std::string_view text, const Dialect& dialect) {
  Rows rows = parse_with_dialect(text, dialect);
  ScoredDialect out{dialect, pattern_score(rows), kTypeScoreFloor, 0.0};
  if (out.pattern > 0.0) out.type = type_score(rows);
  out.consistency = out.pattern * out.type;
  return out;
}

bool DialectConstraints::allows(const Dialect& d) const {
  for (auto s : kSlots) {
    auto i = static_cast<std::size_t>(s);
    auto c = component(d, s);
    if (fixed[i] && *fixed[i] != c) return false;
    if (blocked[i].count(c)) return false;
  }
  return true;
}

Constraint canonical_dialect_constraint(std::string_view text) {
  auto body = trim(text);
  auto name = call_name(body);
  for (auto s : kSlots) {
    if (name == "fix_" + slot_suffix(s) || name == "not_" + slot_suffix(s)) {
      auto call = parse_call(body, 1);
      call.args[0] = spell_char(parse_spelled_char(call.args[0]));
      return print_call(call);
    }
  }
  throw Error(ErrorCode::parse_error, "not a dialect constraint: '" + std::string(text) + "'");
}

DialectConstraints resolve(const InteractionSet& h) {
  DialectConstraints out;
  for (const auto& raw : h.constraints()) {
    auto call = parse_call(canonical_dialect_constraint(raw), 1);
    auto c = parse_spelled_char(call.args[0]);
    for (auto s : kSlots) {
      auto i = static_cast<std::size_t>(s);
      if (call.name == "fix_" + slot_suffix(s)) {
        if (out.fixed[i] && *out.fixed[i] != c)
          throw Error(ErrorCode::conflicting_constraints,
                      "two different " + std::string(to_string(s)) + "s are fixed");
        out.fixed[i] = c;
      } else if (call.name == "not_" + slot_suffix(s)) {
        out.blocked[i].insert(c);
      }
    }
  }
  for (auto s : kSlots) {
    auto i = static_cast<std::size_t>(s);
    if (out.fixed[i] && out.blocked[i].count(*out.fixed[i]))
      throw Error(ErrorCode::conflicting_constraints,
                  "the fixed " + std::string(to_string(s)) + " is also excluded");
  }
  return out;
}

std::vector<Dialect> candidate_dialects(std::string_view text) {
  std::set<char> present;
  for (char c : text) present.insert(c);
  std::vector<std::optional<char>> delimiters{',', std::nullopt};
  for (char c : present) {
    auto u = static_cast<unsigned char>(c);
    if (u >= 128 || std::isalnum(u) || c == '"' || c == '\'' || c == ',') continue;
    if (std::iscntrl(u) && c != '\t') continue;
    delimiters.push_back(c);
  }
  std::vector<std::optional<char>> quotes{std::nullopt};
  for (char q : {'"', '\''})
    if (present.count(q)) quotes.push_back(q);
  std::vector<std::optional<char>> escapes{std::nullopt};
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    if (text[i] != '\\') continue;
    const char next = text[i + 1];
    bool special = next == '"' || next == '\'' ||
                   std::find(delimiters.begin(), delimiters.end(), std::optional<char>(next)) !=
                       delimiters.end();
    if (special) {
      escapes.push_back('\\');
      break;
    }
  }
  std::vector<Dialect> out;
  for (auto d : delimiters)
    for (auto q : quotes)
      for (auto e : escapes) {
        Dialect dialect{d, q, e};
        if (dialect.well_formed()) out.push_back(dialect);
      }
  return out;
}

std::vector<Dialect> candidate_dialects(std::string_view text, const InteractionSet& h) {
  const auto constraints = resolve(h);
  std::vector<Dialect> out;
  for (const auto& d : candidate_dialects(text))
    if (constraints.allows(d)) out.push_back(d);
  if (out.empty())
    throw Error(ErrorCode::conflicting_constraints, "no candidate dialect satisfies the constraints");
  return out;
}

bool ranks_before(const ScoredDialect& a, const ScoredDialect& b) {
  if (a.consistency != b.consistency) return a.consistency > b.consistency;
  auto key = [](const Dialect& d) {
    return std::make_tuple(delimiter_rank(d.delimiter), quote_rank(d.quote), escape_rank(d.escape));
  };
  return key(a.dialect) < key(b.dialect);
}

BoundDialect::BoundDialect(std::string text, const Options& options) : text_(std::move(text)) {
  if (text_.empty()) throw Error(ErrorCode::parse_error, "empty file");
  auto lines = options.get_int("max_lines", 1000);
  if (lines < 0) throw Error(ErrorCode::invalid_argument, "max_lines must be non-negative");
  sample_ = std::string(head_lines(text_, static_cast<std::size_t>(lines)));
  candidates_ = candidate_dialects(sample_);
}

const ScoredDialect& BoundDialect::score(const Dialect& d) {
  auto it = memo_.find(d);
  if (it == memo_.end()) it = memo_.emplace(d, score_dialect(sample_, d)).first;
  return it->second;
}

std::vector<ScoredDialect> BoundDialect::ranking(const InteractionSet& h) {
  const auto constraints = resolve(h);
  std::vector<ScoredDialect> out;
  for (const auto& d : candidates_)
    if (constraints.allows(d)) out.push_back(score(d));
  if (out.empty())
    throw Error(ErrorCode::conflicting_constraints, "no candidate dialect satisfies the constraints");
  std::sort(out.begin(), out.end(), ranks_before);
  return out;
}

Constraint BoundDialect::canonical_constraint(std::string_view text) const {
  return canonical_dialect_constraint(text);
}

Expression BoundDialect::best(const InteractionSet& h) {
  const ScoredDialect top = ranking(h).front();
  Expression e;
  e.script = {to_string(top.dialect)};
  e.score = top.consistency;
  e.payload = top.dialect;
  return e;
}

std::vector<Choice> BoundDialect::choices(const InteractionSet& h) {
  const auto constraints = resolve(h);
  const auto ranked = ranking(h);
  const Dialect& top = ranked.front().dialect;
  std::vector<Choice> out;

  for (auto s : kSlots) {
    auto i = static_cast<std::size_t>(s);
    if (constraints.fixed[i]) continue;
    auto c = component(top, s);
    bool alternative = std::any_of(ranked.begin(), ranked.end(),
                                   [&](const ScoredDialect& sd) { return component(sd.dialect, s) != c; });
    if (!alternative) continue;
    out.push_back(extend(h, print_call({"not_" + slot_suffix(s), {spell_char(c)}}), not_label(s, c)));
  }
  for (auto s : kSlots) {
    auto i = static_cast<std::size_t>(s);
    if (constraints.fixed[i]) continue;
    // `ranked` is already best-first, so first sightings are in order.
    std::vector<std::optional<char>> seen;
    for (const auto& sd : ranked) {
      auto c = component(sd.dialect, s);
      if (c == component(top, s) || std::find(seen.begin(), seen.end(), c) != seen.end()) continue;
      seen.push_back(c);
      out.push_back(extend(h, print_call({"fix_" + slot_suffix(s), {spell_char(c)}}), fix_label(s, c)));
    }
  }
  return out;
}

const Dialect& BoundDialect::dialect_of(const Expression& expression) {
  const auto* d = std::any_cast<Dialect>(&expression.payload);
  if (!d) throw Error(ErrorCode::invalid_argument, "expression is not a dialect");
  return *d;
}

Table BoundDialect::apply(const Expression& expression) const {
  return parse_table(text_, dialect_of(expression));
}

bool BoundDialect::valid(const Expression& expression, const InteractionSet& h) const {
  try {
    const Dialect& d = dialect_of(expression);
    return d.well_formed() && resolve(h).allows(d);
  } catch (const Error&) {
    return false;
  }
}

const AssistantDescriptor& DialectAssistant::descriptor() const {
  static const AssistantDescriptor d{"csv-dialect", "CSV dialect", {"input"}, "dialect"};
  return d;
}

std::unique_ptr<BoundAssistant> DialectAssistant::bind(const Bindings& bindings,
                                                       const Options& options) const {
  check_bindings(descriptor(), bindings);
  return std::make_unique<BoundDialect>(read_file(bindings.at("input")), options);
}

}  // namespace wrangle::dialect
