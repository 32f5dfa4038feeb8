#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wrangle/csv.hpp"

namespace wrangle {

enum class ColumnKind { numeric, categorical, text };

std::string_view to_string(ColumnKind kind);

/// Tokens treated as absent data by kind detection and the statistics.
std::span<const std::string_view> missing_vocabulary();
bool is_missing(std::string_view cell);

/// Locale-free real parse: surrounding whitespace, optional sign, digits with
/// an optional decimal point and exponent. No thousands separators, no
/// inf/nan words.
std::optional<double> parse_real(std::string_view cell);

/// Shortest text that parses back to the same double.
std::string format_real(double value);

/// numeric when at least 90% of non-missing cells parse as reals; otherwise
/// categorical when the distinct non-missing count is at most
/// max(20, 5% of cells); otherwise text.
ColumnKind detect_kind(std::span<const std::string> cells);

class Column {
 public:
  Column(std::string name, std::vector<std::string> cells);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  ColumnKind kind() const { return kind_; }

  /// Parsed non-missing values; empty unless kind() == numeric.
  const std::vector<double>& numeric_view() const { return numeric_; }

  /// Relative frequency of each non-missing value. Defined for every kind
  /// (datadiff compares text columns this way too).
  const std::map<std::string, double>& frequency_view() const { return frequencies_; }

  std::size_t missing_count() const { return missing_; }

 private:
  std::string name_;
  std::vector<std::string> cells_;
  ColumnKind kind_;
  std::vector<double> numeric_;
  std::map<std::string, double> frequencies_;
  std::size_t missing_ = 0;
};

std::map<std::string, double> category_frequencies(std::span<const std::string> cells);

struct ColumnBadge {
  std::string type;
  std::size_t missing = 0;
  std::size_t anomalies = 0;
};

struct Preview {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<ColumnBadge> annotations;
  std::size_t total_rows = 0;
};

/// Immutable table. Column names are made unique on construction by
/// suffixing "_2", "_3", ... to later duplicates.
class Table {
 public:
  Table() = default;
  explicit Table(std::vector<Column> columns);

  static Table from_rows(const std::vector<std::string>& header, const Rows& rows);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_columns() const { return columns_.size(); }
  const std::vector<Column>& columns() const { return columns_; }
  const Column& column(std::size_t index) const { return columns_.at(index); }
  std::optional<std::size_t> find(std::string_view name) const;
  std::vector<std::string> header() const;
  std::vector<std::string> row(std::size_t index) const;

  bool operator==(const Table& other) const;

 private:
  std::vector<Column> columns_;
  std::size_t n_rows_ = 0;
};

/// Parses with `dialect`; first row is the header; ragged rows are padded
/// with empty cells to the modal width (longer rows are truncated).
Table parse_table(std::string_view text, const Dialect& dialect);
Table read_csv(const std::string& path, const Dialect& dialect = Dialect::rfc4180());

/// Canonical form: comma delimiter, minimal quoting, LF endings.
std::string to_csv(const Table& table);
void write_csv(const Table& table, const std::string& path);

Preview preview(const Table& table, std::size_t n);

/// Step function of an empirical distribution.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> values);

  /// Fraction of values <= x; right-continuous, reaches 1.
  double operator()(double x) const;
  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& cumulative() const { return cumulative_; }

 private:
  std::vector<double> support_;
  std::vector<double> cumulative_;
};

EmpiricalCdf empirical_cdf(std::vector<double> values);

double mean(std::span<const double> values);
/// Population standard deviation.
double population_stddev(std::span<const double> values);

}  // namespace wrangle
