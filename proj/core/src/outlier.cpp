#include "wrangle/outlier.hpp"

#include <algorithm>
#include <cmath>

#include "wrangle/encoding.hpp"
#include "wrangle/error.hpp"

namespace wrangle::outlier {

namespace {

double read_m(const Options& options) {
  const double m = options.get_double("m", 3.0);
  if (!(m > 0.0)) throw Error(ErrorCode::invalid_argument, "m must be positive");
  return m;
}

std::vector<std::pair<std::string, std::string>> selections(const InteractionSet& h) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& c : h.constraints()) out.push_back(parse_remove_rows(c));
  return out;
}

Table keep_rows(const Table& table, const std::vector<bool>& keep) {
  std::vector<Column> columns;
  for (const auto& column : table.columns()) {
    std::vector<std::string> cells;
    for (std::size_t r = 0; r < table.n_rows(); ++r)
      if (keep[r]) cells.push_back(column.cells()[r]);
    columns.emplace_back(column.name(), std::move(cells));
  }
  return Table(std::move(columns));
}

}  // namespace

OutlierSet detect_outliers(std::span<const double> values, double m) {
  if (!(m > 0.0)) throw Error(ErrorCode::invalid_argument, "m must be positive");
  OutlierSet out;
  if (values.empty()) return out;
  out.mean = mean(values);
  out.stddev = population_stddev(values);
  if (out.stddev == 0.0) return out;
  const double lo = out.mean - m * out.stddev;
  const double hi = out.mean + m * out.stddev;
  std::set<double> flagged;
  for (double v : values)
    if (v <= lo || v >= hi) flagged.insert(v);
  out.values.assign(flagged.begin(), flagged.end());
  std::stable_sort(out.values.begin(), out.values.end(), [&](double a, double b) {
    return std::abs(a - out.mean) > std::abs(b - out.mean);
  });
  return out;
}

std::vector<std::size_t> outlier_rows(const Table& table, double m) {
  std::vector<bool> flagged(table.n_rows(), false);
  for (const auto& column : table.columns()) {
    if (column.kind() != ColumnKind::numeric) continue;
    const auto set = detect_outliers(column.numeric_view(), m);
    if (set.values.empty()) continue;
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
      const auto& cell = column.cells()[r];
      if (is_missing(cell)) continue;
      auto v = parse_real(cell);
      if (v && std::find(set.values.begin(), set.values.end(), *v) != set.values.end()) flagged[r] = true;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < flagged.size(); ++r)
    if (flagged[r]) out.push_back(r);
  return out;
}

std::vector<AggregateFilter> collect_aggregate_filters(const Table& table, double m) {
  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  const auto rows = outlier_rows(table, m);
  for (const auto& column : table.columns()) {
    if (column.kind() == ColumnKind::numeric) continue;
    for (auto r : rows) {
      const auto& cell = column.cells()[r];
      if (!is_missing(cell)) ++counts[{column.name(), cell}];
    }
  }
  std::vector<AggregateFilter> out;
  for (const auto& [key, count] : counts) out.push_back({key.first, key.second, count});
  std::stable_sort(out.begin(), out.end(),
                   [](const AggregateFilter& a, const AggregateFilter& b) { return a.count > b.count; });
  return out;
}

Constraint remove_value_constraint(double value) { return print_call({"remove_value", {format_real(value)}}); }

Constraint remove_rows_constraint(const std::string& column, const std::string& value) {
  return "remove_rows(" + percent_escape(column, ",=") + "=" + percent_escape(value) + ")";
}

std::pair<std::string, std::string> parse_remove_rows(std::string_view text) {
  auto body = trim(text);
  if (call_name(body) != "remove_rows" || body.back() != ')')
    throw Error(ErrorCode::parse_error, "expected remove_rows(column=value), got '" + std::string(text) + "'");
  std::string_view inner(body);
  inner = inner.substr(12, inner.size() - 13);
  auto eq = inner.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw Error(ErrorCode::parse_error, "expected remove_rows(column=value), got '" + std::string(text) + "'");
  return {percent_unescape(inner.substr(0, eq)), percent_unescape(inner.substr(eq + 1))};
}

Table remove_rows(const Table& table, const std::vector<std::pair<std::string, std::string>>& filters) {
  std::vector<bool> keep(table.n_rows(), true);
  for (const auto& [name, value] : filters) {
    auto c = table.find(name);
    if (!c) continue;
    const auto& cells = table.column(*c).cells();
    for (std::size_t r = 0; r < cells.size(); ++r)
      if (cells[r] == value) keep[r] = false;
  }
  return keep_rows(table, keep);
}

BoundOutlier::BoundOutlier(Table table, std::size_t column, const Options& options)
    : table_(std::move(table)), column_(column), m_(read_m(options)) {
  const auto& col = table_.column(column_);
  if (col.kind() != ColumnKind::numeric)
    throw Error(ErrorCode::invalid_argument, "column '" + col.name() + "' is not numeric");
  outliers_ = detect_outliers(col.numeric_view(), m_);
}

Constraint BoundOutlier::canonical_constraint(std::string_view text) const {
  auto body = trim(text);
  if (call_name(body) != "remove_value")
    throw Error(ErrorCode::parse_error, "not an outlier constraint: '" + std::string(text) + "'");
  auto call = parse_call(body, 1);
  auto v = parse_real(call.args[0]);
  if (!v) throw Error(ErrorCode::parse_error, "remove_value needs a number: '" + std::string(text) + "'");
  return remove_value_constraint(*v);
}

std::set<double> BoundOutlier::selected(const InteractionSet& h) const {
  std::set<double> out;
  for (const auto& c : h.constraints())
    out.insert(*parse_real(parse_call(canonical_constraint(c), 1).args[0]));
  return out;
}

Expression BoundOutlier::best(const InteractionSet& h) {
  Expression e;
  e.script = canonical(h).constraints();
  e.payload = canonical(h);
  return e;
}

std::vector<Choice> BoundOutlier::choices(const InteractionSet& h) {
  const auto chosen = selected(h);
  const auto& name = table_.column(column_).name();
  std::vector<Choice> out;
  for (double v : outliers_.values) {
    if (chosen.count(v)) continue;
    out.push_back(extend(h, remove_value_constraint(v), "Remove " + format_real(v) + " from '" + name + "'"));
  }
  return out;
}

Table BoundOutlier::apply(const Expression& expression) const {
  const auto* h = std::any_cast<InteractionSet>(&expression.payload);
  if (!h) throw Error(ErrorCode::invalid_argument, "expression is not a removal selection");
  const auto chosen = selected(*h);
  const auto& cells = table_.column(column_).cells();
  std::vector<bool> keep(cells.size(), true);
  for (std::size_t r = 0; r < cells.size(); ++r) {
    auto v = is_missing(cells[r]) ? std::nullopt : parse_real(cells[r]);
    if (v && chosen.count(*v)) keep[r] = false;
  }
  return keep_rows(table_, keep);
}

bool BoundOutlier::valid(const Expression& expression, const InteractionSet& h) const {
  const auto* e = std::any_cast<InteractionSet>(&expression.payload);
  try {
    return e && selected(*e) == selected(h);
  } catch (const Error&) {
    return false;
  }
}

BoundAggregates::BoundAggregates(Table table, const Options& options)
    : table_(std::move(table)), m_(read_m(options)) {
  filters_ = collect_aggregate_filters(table_, m_);
}

Constraint BoundAggregates::canonical_constraint(std::string_view text) const {
  auto [column, value] = parse_remove_rows(text);
  if (!table_.find(column)) throw Error(ErrorCode::parse_error, "no column '" + column + "'");
  return remove_rows_constraint(column, value);
}

Expression BoundAggregates::best(const InteractionSet& h) {
  Expression e;
  e.script = canonical(h).constraints();
  e.payload = canonical(h);
  return e;
}

std::vector<Choice> BoundAggregates::choices(const InteractionSet& h) {
  const auto current = canonical(h);
  std::vector<Choice> out;
  for (const auto& f : filters_) {
    auto c = remove_rows_constraint(f.column, f.value);
    if (current.contains(c)) continue;
    out.push_back(extend(h, std::move(c), "Remove rows where " + f.column + " = " + f.value));
  }
  return out;
}

Table BoundAggregates::apply(const Expression& expression) const {
  const auto* h = std::any_cast<InteractionSet>(&expression.payload);
  if (!h) throw Error(ErrorCode::invalid_argument, "expression is not a removal selection");
  return remove_rows(table_, selections(*h));
}

bool BoundAggregates::valid(const Expression& expression, const InteractionSet& h) const {
  const auto* e = std::any_cast<InteractionSet>(&expression.payload);
  try {
    return e && canonical(*e) == canonical(h);
  } catch (const Error&) {
    return false;
  }
}

const AssistantDescriptor& OutlierAssistant::descriptor() const {
  static const AssistantDescriptor d{"outlier", "Outlier removal", {"input"}, "outlier"};
  return d;
}

std::unique_ptr<BoundAssistant> OutlierAssistant::bind(const Bindings& bindings,
                                                       const Options& options) const {
  check_bindings(descriptor(), bindings);
  Table table = read_csv(bindings.at("input"));
  const std::size_t column = select_column(table, options);
  return std::make_unique<BoundOutlier>(std::move(table), column, options);
}

const AssistantDescriptor& AggregatesAssistant::descriptor() const {
  static const AssistantDescriptor d{"aggregates", "Aggregate row removal", {"input"}, "aggregates"};
  return d;
}

std::unique_ptr<BoundAssistant> AggregatesAssistant::bind(const Bindings& bindings,
                                                          const Options& options) const {
  check_bindings(descriptor(), bindings);
  return std::make_unique<BoundAggregates>(read_csv(bindings.at("input")), options);
}

}  // namespace wrangle::outlier
