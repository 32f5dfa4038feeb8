#include "wrangle/table.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "wrangle/encoding.hpp"
#include "wrangle/error.hpp"

namespace wrangle {

namespace {

constexpr std::array<std::string_view, 10> kMissing = {
    "", "?", "NA", "N/A", "na", "null", "NULL", "-", "NaN", "nan"};

}  // namespace

std::string_view to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::text: return "text";
  }
  return "text";
}

std::span<const std::string_view> missing_vocabulary() { return kMissing; }

bool is_missing(std::string_view cell) {
  std::string trimmed = trim(cell);
  return std::find(kMissing.begin(), kMissing.end(), trimmed) != kMissing.end();
}

std::optional<double> parse_real(std::string_view cell) {
  std::string s = trim(cell);
  if (s.empty()) return std::nullopt;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') ++i;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  }
  if (digits == 0) return std::nullopt;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++exp_digits;
    if (exp_digits == 0) return std::nullopt;
  }
  if (i != s.size()) return std::nullopt;
  const char* begin = s.data() + (s[0] == '+' ? 1 : 0);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
  if (ec != std::errc{} || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::string format_real(double value) {
  if (value == 0.0) return "0";
  std::array<char, 64> buffer{};
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), ptr);
}

ColumnKind detect_kind(std::span<const std::string> cells) {
  std::size_t present = 0;
  std::size_t parsed = 0;
  std::unordered_set<std::string_view> distinct;
  for (const auto& cell : cells) {
    if (is_missing(cell)) continue;
    ++present;
    if (parse_real(cell)) ++parsed;
    distinct.insert(cell);
  }
  if (present > 0 && parsed * 10 >= present * 9) return ColumnKind::numeric;
  const double limit = std::max(20.0, 0.05 * static_cast<double>(cells.size()));
  if (static_cast<double>(distinct.size()) <= limit) return ColumnKind::categorical;
  return ColumnKind::text;
}

std::map<std::string, double> category_frequencies(std::span<const std::string> cells) {
  std::map<std::string, double> counts;
  std::size_t present = 0;
  for (const auto& cell : cells) {
    if (is_missing(cell)) continue;
    counts[cell] += 1.0;
    ++present;
  }
  for (auto& [value, count] : counts) count /= static_cast<double>(present);
  return counts;
}

Column::Column(std::string name, std::vector<std::string> cells)
    : name_(std::move(name)), cells_(std::move(cells)), kind_(detect_kind(cells_)) {
  for (const auto& cell : cells_) {
    if (is_missing(cell)) {
      ++missing_;
      continue;
    }
    if (kind_ == ColumnKind::numeric) {
      if (auto value = parse_real(cell)) numeric_.push_back(*value);
    }
  }
  frequencies_ = category_frequencies(cells_);
}

Table::Table(std::vector<Column> columns) : columns_(std::move(columns)) {
  n_rows_ = columns_.empty() ? 0 : columns_.front().size();
  std::set<std::string> used;
  for (auto& column : columns_) {
    if (column.size() != n_rows_)
      throw Error(ErrorCode::invalid_argument, "column " + column.name() + " has " +
                                                   std::to_string(column.size()) + " cells, expected " +
                                                   std::to_string(n_rows_));
    if (used.count(column.name())) {
      int suffix = 2;
      std::string candidate;
      do {
        candidate = column.name() + "_" + std::to_string(suffix++);
      } while (used.count(candidate));
      column = Column(candidate, column.cells());
    }
    used.insert(column.name());
  }
}

Table Table::from_rows(const std::vector<std::string>& header, const Rows& rows) {
  std::vector<std::vector<std::string>> cells(header.size());
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < header.size(); ++c)
      cells[c].push_back(c < row.size() ? row[c] : std::string());
  }
  std::vector<Column> columns;
  for (std::size_t c = 0; c < header.size(); ++c) columns.emplace_back(header[c], std::move(cells[c]));
  return Table(std::move(columns));
}

std::optional<std::size_t> Table::find(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name() == name) return i;
  return std::nullopt;
}

std::vector<std::string> Table::header() const {
  std::vector<std::string> names;
  for (const auto& column : columns_) names.push_back(column.name());
  return names;
}

std::vector<std::string> Table::row(std::size_t index) const {
  std::vector<std::string> out;
  for (const auto& column : columns_) out.push_back(column.cells().at(index));
  return out;
}

bool Table::operator==(const Table& other) const {
  if (columns_.size() != other.columns_.size()) return false;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name() != other.columns_[i].name() ||
        columns_[i].cells() != other.columns_[i].cells())
      return false;
  }
  return true;
}

Table parse_table(std::string_view text, const Dialect& dialect) {
  Rows rows = parse_with_dialect(text, dialect);
  if (rows.empty()) throw Error(ErrorCode::parse_error, "no rows in CSV input");
  std::unordered_map<std::size_t, std::size_t> widths;
  for (const auto& row : rows) ++widths[row.size()];
  std::size_t modal = 0;
  std::size_t best = 0;
  for (auto [width, count] : widths) {
    if (count > best || (count == best && width > modal)) {
      modal = width;
      best = count;
    }
  }
  std::vector<std::string> header = rows.front();
  header.resize(modal);
  for (std::size_t c = 0; c < modal; ++c) {
    if (header[c].empty()) header[c] = "V" + std::to_string(c + 1);
  }
  Rows body(rows.begin() + 1, rows.end());
  return Table::from_rows(header, body);
}

Table read_csv(const std::string& path, const Dialect& dialect) {
  return parse_table(read_file(path), dialect);
}

std::string to_csv(const Table& table) {
  std::string out;
  const bool single = table.n_columns() == 1;
  auto emit_row = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out += ',';
      // A lone empty cell would otherwise read back as a blank line.
      out += (single && cells[c].empty()) ? std::string("\"\"") : csv_field(cells[c]);
    }
    out += '\n';
  };
  emit_row(table.header());
  for (std::size_t r = 0; r < table.n_rows(); ++r) emit_row(table.row(r));
  return out;
}

void write_csv(const Table& table, const std::string& path) { write_file(path, to_csv(table)); }

Preview preview(const Table& table, std::size_t n) {
  Preview p;
  p.header = table.header();
  p.total_rows = table.n_rows();
  const std::size_t shown = std::min(n, table.n_rows());
  for (std::size_t r = 0; r < shown; ++r) p.rows.push_back(table.row(r));
  for (const auto& column : table.columns())
    p.annotations.push_back({std::string(to_string(column.kind())), column.missing_count(), 0});
  return p;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::invalid_argument, "empirical CDF of no values");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    support_.push_back(values[i]);
    cumulative_.push_back(static_cast<double>(i + 1) / n);
  }
}

double EmpiricalCdf::operator()(double x) const {
  auto it = std::upper_bound(support_.begin(), support_.end(), x);
  if (it == support_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

EmpiricalCdf empirical_cdf(std::vector<double> values) { return EmpiricalCdf(std::move(values)); }

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double population_stddev(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double mu = mean(values);
  double sum = 0.0;
  for (double v : values) sum += (v - mu) * (v - mu);
  return std::sqrt(sum / static_cast<double>(values.size()));
}

}  // namespace wrangle
