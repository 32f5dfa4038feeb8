#include "wrangle/typeinfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "wrangle/encoding.hpp"
#include "wrangle/error.hpp"

namespace wrangle::ptype {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void emit_digits(Pfsm& m, std::size_t s) {
  for (char c = '0'; c <= '9'; ++c) m.emit(s, static_cast<unsigned char>(c), 0.1);
}

void emit_printable(Pfsm& m, std::size_t s) {
  for (int c = 32; c <= 126; ++c) m.emit(s, static_cast<unsigned char>(c), 1.0 / 95.0);
}

// A chain that spells `word` exactly; letters may appear in either case.
void add_word(Pfsm& m, std::string_view word, double weight, bool any_case) {
  std::size_t prev = 0;
  for (std::size_t k = 0; k < word.size(); ++k) {
    const bool last = k + 1 == word.size();
    std::size_t s = m.add_state(k == 0 ? weight : 0.0, last ? 1.0 : 0.0);
    const auto c = static_cast<unsigned char>(word[k]);
    if (any_case && std::isalpha(c)) {
      m.emit(s, static_cast<unsigned char>(std::tolower(c)), 0.5);
      m.emit(s, static_cast<unsigned char>(std::toupper(c)), 0.5);
    } else {
      m.emit(s, c, 1.0);
    }
    if (k > 0) m.add_edge(prev, s, 1.0);
    prev = s;
  }
}

double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log(std::exp(a - hi) + std::exp(b - hi));
}

std::string join_values(const std::vector<std::string>& values) {
  std::string out = "[";
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) out += ',';
    out += values[k];
  }
  return out + "]";
}

std::string quoted(const std::string& s) { return "'" + s + "'"; }

}  // namespace

std::string_view to_string(PrimitiveType type) {
  switch (type) {
    case PrimitiveType::boolean: return "boolean";
    case PrimitiveType::integer: return "integer";
    case PrimitiveType::floating: return "float";
    case PrimitiveType::date: return "date";
    case PrimitiveType::string: return "string";
  }
  return "string";
}

PrimitiveType parse_type(std::string_view text) {
  const std::string lower = to_lower(trim(text));
  for (auto t : kAllTypes)
    if (lower == to_string(t)) return t;
  throw Error(ErrorCode::parse_error, "unknown type '" + std::string(text) + "'");
}

Pfsm boolean_machine() {
  Pfsm m("boolean");
  constexpr std::array<std::string_view, 10> words = {"0", "1", "true", "false", "yes",
                                                      "no", "t", "f", "y", "n"};
  for (auto w : words) add_word(m, w, 1.0 / words.size(), true);
  return m;
}

Pfsm integer_machine() {
  Pfsm m("integer");
  auto sign = m.add_state(0.1, 0.0);
  auto digit = m.add_state(0.9, 0.1);
  m.emit(sign, '+', 0.5);
  m.emit(sign, '-', 0.5);
  emit_digits(m, digit);
  m.add_edge(sign, digit, 1.0);
  m.add_edge(digit, digit, 0.9);
  return m;
}

Pfsm float_machine() {
  Pfsm m("float");
  auto sign = m.add_state(0.1, 0.0);
  auto digit = m.add_state(0.9, 0.07);
  auto point = m.add_state(0.0, 0.0);
  auto fraction = m.add_state(0.0, 0.1);
  m.emit(sign, '+', 0.5);
  m.emit(sign, '-', 0.5);
  emit_digits(m, digit);
  m.emit(point, '.', 1.0);
  emit_digits(m, fraction);
  m.add_edge(sign, digit, 1.0);
  m.add_edge(digit, digit, 0.63);
  m.add_edge(digit, point, 0.3);
  m.add_edge(point, fraction, 1.0);
  m.add_edge(fraction, fraction, 0.9);
  return m;
}

Pfsm date_machine() {
  Pfsm m("date");
  constexpr std::array<std::string_view, 5> formats = {"YYYY-MM-DD", "DD/MM/YYYY", "MM/DD/YYYY",
                                                       "YYYY/MM/DD", "DD-MM-YYYY"};
  for (auto format : formats) {
    std::size_t prev = 0;
    for (std::size_t k = 0; k < format.size(); ++k) {
      const bool last = k + 1 == format.size();
      auto s = m.add_state(k == 0 ? 1.0 / formats.size() : 0.0, last ? 1.0 : 0.0);
      const char c = format[k];
      if (c == 'Y' || c == 'M' || c == 'D')
        emit_digits(m, s);
      else
        m.emit(s, static_cast<unsigned char>(c), 1.0);
      if (k > 0) m.add_edge(prev, s, 1.0);
      prev = s;
    }
  }
  return m;
}

Pfsm string_machine() {
  Pfsm m("string");
  auto s = m.add_state(1.0, 0.02);
  emit_printable(m, s);
  m.add_edge(s, s, 0.98);
  return m;
}

Pfsm missing_machine() {
  Pfsm m("missing");
  const auto vocabulary = missing_vocabulary();
  const double weight = 1.0 / static_cast<double>(vocabulary.size());
  for (auto token : vocabulary) {
    if (token.empty())
      m.set_empty_weight(weight);
    else
      add_word(m, token, weight, false);
  }
  return m;
}

Pfsm anomaly_machine() {
  Pfsm m("anomaly");
  auto s = m.add_state(1.0, 0.1);
  emit_printable(m, s);
  m.add_edge(s, s, 0.9);
  return m;
}

const std::array<Pfsm, kMachineCount>& standard_machines() {
  static const std::array<Pfsm, kMachineCount> machines = [] {
    std::array<Pfsm, kMachineCount> out = {boolean_machine(), integer_machine(), float_machine(),
                                           date_machine(),    string_machine(),  missing_machine(),
                                           anomaly_machine()};
    for (const auto& m : out) m.validate();
    return out;
  }();
  return machines;
}

std::string normalize_value(std::string_view value) {
  std::string out(value);
  for (char& c : out) {
    auto u = static_cast<unsigned char>(c);
    if (u < 32 || u > 126) c = '~';
  }
  return out;
}

std::string TypeExpression::to_string() const {
  return "type=" + std::string(ptype::to_string(type)) + " missing=" + join_values(missing) +
         " anomalies=" + join_values(anomalies);
}

Constraint canonical_type_constraint(std::string_view text) {
  auto body = trim(text);
  auto name = call_name(body);
  if (name == "not_type") {
    auto call = parse_call(body, 1);
    call.args[0] = std::string(to_string(parse_type(call.args[0])));
    return print_call(call);
  }
  if (name == "not_missing" || name == "not_anomaly") return print_call(parse_call(body, 1));
  throw Error(ErrorCode::parse_error, "not a type constraint: '" + std::string(text) + "'");
}

TypeConstraints resolve(const InteractionSet& h) {
  TypeConstraints out;
  for (const auto& raw : h.constraints()) {
    auto call = parse_call(canonical_type_constraint(raw), 1);
    if (call.name == "not_type")
      out.excluded.insert(parse_type(call.args[0]));
    else if (call.name == "not_missing")
      out.not_missing.insert(call.args[0]);
    else
      out.not_anomaly.insert(call.args[0]);
  }
  return out;
}

TypeModel::TypeModel(const std::vector<std::string>& cells, MixtureWeights weights)
    : weights_(weights) {
  std::map<std::string, std::size_t> counts;
  for (const auto& cell : cells) ++counts[cell];
  const auto& machines = standard_machines();
  for (const auto& [value, count] : counts) {
    ValueLikelihood v{value, count, {}};
    const std::string normalized = normalize_value(value);
    for (std::size_t k = 0; k < kMachineCount; ++k) {
      v.log_p[k] = pfsm_forward(machines[k], normalized);
      ++forward_calls_;
    }
    values_.push_back(std::move(v));
  }
  std::stable_sort(values_.begin(), values_.end(),
                   [](const auto& a, const auto& b) { return a.count > b.count; });
}

double TypeModel::log_score(PrimitiveType type, const TypeConstraints& constraints) const {
  const auto t = static_cast<std::size_t>(type);
  const double lv = std::log(weights_.valid);
  const double lm = std::log(weights_.missing);
  const double la = std::log(weights_.anomaly);
  double total = 0.0;
  for (const auto& v : values_) {
    double term = lv + v.log_p[t];
    if (!constraints.clamped(v.value)) {
      term = log_sum_exp(term, lm + v.log_p[kMissingMachine]);
      term = log_sum_exp(term, la + v.log_p[kAnomalyMachine]);
    }
    if (term == kNegInf) return kNegInf;
    total += static_cast<double>(v.count) * term;
  }
  return total;
}

std::array<double, kTypeCount> TypeModel::posterior() const {
  std::array<double, kTypeCount> scores{};
  double hi = kNegInf;
  for (std::size_t t = 0; t < kTypeCount; ++t) {
    scores[t] = log_score(kAllTypes[t]);
    hi = std::max(hi, scores[t]);
  }
  std::array<double, kTypeCount> out{};
  if (hi == kNegInf) return out;
  double sum = 0.0;
  for (std::size_t t = 0; t < kTypeCount; ++t) {
    out[t] = std::exp(scores[t] - hi);
    sum += out[t];
  }
  for (auto& p : out) p /= sum;
  return out;
}

Component TypeModel::component(const ValueLikelihood& v, PrimitiveType type,
                               const TypeConstraints& constraints) const {
  if (constraints.clamped(v.value)) return Component::valid;
  const double valid = std::log(weights_.valid) + v.log_p[static_cast<std::size_t>(type)];
  const double missing = std::log(weights_.missing) + v.log_p[kMissingMachine];
  const double anomaly = std::log(weights_.anomaly) + v.log_p[kAnomalyMachine];
  if (valid >= missing && valid >= anomaly) return Component::valid;
  return missing >= anomaly ? Component::missing : Component::anomaly;
}

TypeExpression TypeModel::best(const TypeConstraints& constraints) const {
  std::optional<PrimitiveType> winner;
  double best_score = kNegInf;
  for (auto t : kAllTypes) {
    if (constraints.excluded.count(t)) continue;
    const double s = log_score(t, constraints);
    if (s > best_score) {
      best_score = s;
      winner = t;
    }
  }
  if (!winner)
    throw Error(ErrorCode::exhausted_constraints, "every type is excluded by the constraints");
  TypeExpression e;
  e.type = *winner;
  for (const auto& v : values_) {
    switch (component(v, e.type, constraints)) {
      case Component::missing: e.missing.push_back(v.value); break;
      case Component::anomaly: e.anomalies.push_back(v.value); break;
      case Component::valid: break;
    }
  }
  return e;
}

BoundTypeInfer::BoundTypeInfer(Table table, std::size_t column, const Options& options)
    : table_(std::move(table)),
      column_(column),
      model_(table_.column(column_).cells(),
             MixtureWeights{options.get_double("w_valid", 0.895), options.get_double("w_missing", 0.07),
                            options.get_double("w_anomaly", 0.035)}) {
  const auto& w = model_.weights();
  if (w.valid <= 0 || w.missing <= 0 || w.anomaly <= 0)
    throw Error(ErrorCode::invalid_argument, "mixture weights must be positive");
}

Constraint BoundTypeInfer::canonical_constraint(std::string_view text) const {
  return canonical_type_constraint(text);
}

Expression BoundTypeInfer::best(const InteractionSet& h) {
  const auto constraints = resolve(h);
  TypeExpression te = model_.best(constraints);
  Expression e;
  e.script = {te.to_string()};
  e.score = model_.log_score(te.type, constraints);
  e.payload = std::move(te);
  return e;
}

std::vector<Choice> BoundTypeInfer::choices(const InteractionSet& h) {
  const TypeConstraints constraints = resolve(h);
  const TypeExpression te = model_.best(constraints);
  const std::string& name = column().name();
  // A choice is only offered when some type can still explain the column
  // afterwards; clamped values may rule out every remaining type.
  auto viable = [&](auto&& add) {
    TypeConstraints next = constraints;
    add(next);
    for (auto t : kAllTypes)
      if (!next.excluded.count(t) && model_.log_score(t, next) > kNegInf) return true;
    return false;
  };
  std::vector<Choice> out;
  if (viable([&](TypeConstraints& c) { c.excluded.insert(te.type); }))
    out.push_back(extend(h, print_call({"not_type", {std::string(to_string(te.type))}}),
                         quoted(name) + " is not " + std::string(to_string(te.type))));
  for (const auto& u : te.missing)
    if (viable([&](TypeConstraints& c) { c.not_missing.insert(u); }))
      out.push_back(extend(h, print_call({"not_missing", {u}}), quoted(u) + " is not a missing value"));
  for (const auto& v : te.anomalies)
    if (viable([&](TypeConstraints& c) { c.not_anomaly.insert(v); }))
      out.push_back(extend(h, print_call({"not_anomaly", {v}}), quoted(v) + " is not an anomaly"));
  return out;
}

const TypeExpression& BoundTypeInfer::expression_of(const Expression& expression) {
  const auto* te = std::any_cast<TypeExpression>(&expression.payload);
  if (!te) throw Error(ErrorCode::invalid_argument, "expression is not a type expression");
  return *te;
}

Table BoundTypeInfer::apply(const Expression& expression) const {
  const TypeExpression& te = expression_of(expression);
  std::set<std::string> missing(te.missing.begin(), te.missing.end());
  std::set<std::string> anomalies(te.anomalies.begin(), te.anomalies.end());
  std::vector<std::string> status;
  for (const auto& cell : column().cells())
    status.push_back(missing.count(cell) ? "missing" : anomalies.count(cell) ? "anomaly" : "valid");
  std::vector<Column> columns = table_.columns();
  columns.emplace_back(column().name() + "_status", std::move(status));
  return Table(std::move(columns));
}

bool BoundTypeInfer::valid(const Expression& expression, const InteractionSet& h) const {
  try {
    const auto constraints = resolve(h);
    const TypeExpression& te = expression_of(expression);
    if (constraints.excluded.count(te.type)) return false;
    for (const auto& u : te.missing)
      if (constraints.not_missing.count(u)) return false;
    for (const auto& v : te.anomalies)
      if (constraints.not_anomaly.count(v)) return false;
    return true;
  } catch (const Error&) {
    return false;
  }
}

Preview BoundTypeInfer::preview(const Expression& expression, const Table& output,
                                std::size_t rows) const {
  Preview p = wrangle::preview(output, rows);
  const TypeExpression& te = expression_of(expression);
  std::size_t missing = 0, anomalies = 0;
  for (const auto& cell : output.column(output.n_columns() - 1).cells()) {
    if (cell == "missing") ++missing;
    if (cell == "anomaly") ++anomalies;
  }
  p.annotations[column_] = ColumnBadge{std::string(to_string(te.type)), missing, anomalies};
  return p;
}

const AssistantDescriptor& TypeInferAssistant::descriptor() const {
  static const AssistantDescriptor d{"ptype", "Column type inference", {"input"}, "ptype"};
  return d;
}

std::unique_ptr<BoundAssistant> TypeInferAssistant::bind(const Bindings& bindings,
                                                         const Options& options) const {
  check_bindings(descriptor(), bindings);
  Table table = read_csv(bindings.at("input"));
  const std::size_t column = select_column(table, options);
  return std::make_unique<BoundTypeInfer>(std::move(table), column, options);
}

}  // namespace wrangle::ptype
