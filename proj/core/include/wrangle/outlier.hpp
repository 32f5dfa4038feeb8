#pragma once

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wrangle/assistant.hpp"

namespace wrangle::outlier {

struct OutlierSet {
  double mean = 0.0;
  double stddev = 0.0;
  /// Distinct flagged values, farthest from the mean first (ties ascending).
  std::vector<double> values;
};

/// Flags o <= mean - m*sigma or o >= mean + m*sigma with the population
/// standard deviation; sigma == 0 flags nothing. Throws invalid_argument
/// for m <= 0.
OutlierSet detect_outliers(std::span<const double> values, double m);

struct AggregateFilter {
  std::string column;
  std::string value;
  std::size_t count = 0;

  bool operator==(const AggregateFilter& o) const { return column == o.column && value == o.value; }
};

/// Rows holding an m-sigma outlier in any numeric column, 0-based.
std::vector<std::size_t> outlier_rows(const Table& table, double m);

/// Distinct (non-numeric column, value) pairs from outlier rows, by
/// descending count, then column, then value.
std::vector<AggregateFilter> collect_aggregate_filters(const Table& table, double m);

/// `remove_value(100)`
Constraint remove_value_constraint(double value);
/// `remove_rows(c_regis=EU28)`; '=' and ',' in the column name are escaped.
Constraint remove_rows_constraint(const std::string& column, const std::string& value);
std::pair<std::string, std::string> parse_remove_rows(std::string_view text);

/// Single numeric column: e = H, f drops rows whose value is selected.
class BoundOutlier final : public BoundAssistant {
 public:
  BoundOutlier(Table table, std::size_t column, const Options& options);

  Constraint canonical_constraint(std::string_view text) const override;
  Expression best(const InteractionSet& h) override;
  std::vector<Choice> choices(const InteractionSet& h) override;
  Table apply(const Expression& expression) const override;
  bool valid(const Expression& expression, const InteractionSet& h) const override;

  const OutlierSet& outliers() const { return outliers_; }

 private:
  std::set<double> selected(const InteractionSet& h) const;

  Table table_;
  std::size_t column_;
  double m_ = 3.0;
  OutlierSet outliers_;
};

/// Aggregate rows: e = H as column=value row filters.
class BoundAggregates final : public BoundAssistant {
 public:
  BoundAggregates(Table table, const Options& options);

  Constraint canonical_constraint(std::string_view text) const override;
  Expression best(const InteractionSet& h) override;
  std::vector<Choice> choices(const InteractionSet& h) override;
  Table apply(const Expression& expression) const override;
  bool valid(const Expression& expression, const InteractionSet& h) const override;

  const std::vector<AggregateFilter>& filters() const { return filters_; }

 private:
  Table table_;
  double m_ = 3.0;
  std::vector<AggregateFilter> filters_;
};

/// Keeps rows matching none of the filters.
Table remove_rows(const Table& table, const std::vector<std::pair<std::string, std::string>>& filters);

class OutlierAssistant final : public Assistant {
 public:
  const AssistantDescriptor& descriptor() const override;
  std::unique_ptr<BoundAssistant> bind(const Bindings& bindings,
                                       const Options& options) const override;
};

class AggregatesAssistant final : public Assistant {
 public:
  const AssistantDescriptor& descriptor() const override;
  std::unique_ptr<BoundAssistant> bind(const Bindings& bindings,
                                       const Options& options) const override;
};

}  // namespace wrangle::outlier
