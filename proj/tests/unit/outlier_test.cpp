#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "wrangle/error.hpp"
#include "wrangle/outlier.hpp"

namespace wrangle::outlier {
namespace {

// Two-pass mean/variance and a literal interval test.
std::set<double> oracle(const std::vector<double>& xs, double m) {
  long double sum = 0;
  for (double x : xs) sum += x;
  const double mu = static_cast<double>(sum / xs.size());
  long double ss = 0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  const double sigma = std::sqrt(static_cast<double>(ss / xs.size()));
  std::set<double> out;
  if (sigma == 0.0) return out;
  for (double x : xs)
    if (x <= mu - m * sigma || x >= mu + m * sigma) out.insert(x);
  return out;
}

Table single(const std::vector<double>& xs) {
  std::vector<std::string> cells;
  for (double x : xs) cells.push_back(format_real(x));
  return Table({Column("x", cells)});
}

std::vector<double> spike() {
  std::vector<double> xs(50, 0.0);
  xs.push_back(100.0);
  return xs;
}

TEST(DetectOutliers, Examples) {
  auto xs = spike();
  EXPECT_EQ(detect_outliers(xs, 3.0).values, std::vector<double>{100.0});
  std::vector<double> flat(10, 4.0);
  EXPECT_TRUE(detect_outliers(flat, 3.0).values.empty());
  std::vector<double> sym = {-1.0, 1.0};
  auto o = detect_outliers(sym, 0.5);
  EXPECT_EQ(std::set<double>(o.values.begin(), o.values.end()), (std::set<double>{-1.0, 1.0}));
  EXPECT_THROW(detect_outliers(sym, 0.0), Error);
}

TEST(DetectOutliers, MatchesOracleOnRandomColumns) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    std::vector<double> xs;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
      // Integers with occasional large spikes keep the arithmetic exact.
      double v = std::round(normal(rng) * 3.0);
      if (rng() % 15 == 0) v *= 40.0;
      xs.push_back(v);
    }
    const double m = 1.0 + static_cast<double>(rng() % 3);
    auto got = detect_outliers(xs, m).values;
    EXPECT_EQ(std::set<double>(got.begin(), got.end()), oracle(xs, m)) << "trial " << trial;
  }
}

TEST(Outlier, BestIsIdentityAndChoicesCoverO) {
  BoundOutlier b(single(spike()), 0, Options{});
  EXPECT_TRUE(b.best({}).script.empty());
  auto choices = b.choices({});
  ASSERT_EQ(choices.size(), 1u);
  EXPECT_EQ(choices[0].label, "Remove 100 from 'x'");
  const auto h = choices[0].next;
  EXPECT_EQ(h.constraints(), std::vector<std::string>{"remove_value(100)"});
  auto e = b.best(h);
  EXPECT_EQ(e.script, h.constraints());
  EXPECT_EQ(b.best(InteractionSet(e.script)).script, e.script);
  EXPECT_TRUE(b.valid(e, h));
  EXPECT_FALSE(b.valid(b.best({}), h));
  EXPECT_TRUE(b.choices(h).empty());
  EXPECT_EQ(b.apply(e).n_rows(), 50u);
  EXPECT_EQ(b.apply(b.best({})), single(spike()));
}

TEST(Outlier, ChoicesOrderedByDistanceFromMean) {
  std::vector<double> xs(40, 0.0);
  xs.push_back(-60.0);
  xs.push_back(90.0);
  xs.push_back(85.0);
  BoundOutlier b(single(xs), 0, Options{{"m", "2"}});
  std::vector<std::string> labels;
  for (const auto& c : b.choices({})) labels.push_back(c.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"Remove 90 from 'x'", "Remove 85 from 'x'",
                                              "Remove -60 from 'x'"}));
  EXPECT_EQ(b.canonical_constraint("remove_value(90.0)"), "remove_value(90)");
  EXPECT_THROW(b.canonical_constraint("remove_value(ninety)"), Error);
}

TEST(Outlier, MissingValuesAreIgnored) {
  std::vector<std::string> cells(30, "1");
  cells.push_back("NA");
  cells.push_back("500");
  cells.push_back("2");
  Table t({Column("x", cells)});
  BoundOutlier b(t, 0, Options{});
  auto choices = b.choices({});
  ASSERT_EQ(choices.size(), 1u);
  EXPECT_EQ(b.apply(b.best(choices[0].next)).n_rows(), 32u);
}

TEST(Aggregates, AviationChoiceSets) {
  const auto t = read_csv(testing::fixture("aviation.csv"));
  std::map<std::string, std::set<std::string>> by_column;
  for (const auto& f : collect_aggregate_filters(t, 3.0)) by_column[f.column].insert(f.value);
  EXPECT_EQ(by_column["c_regis"], (std::set<std::string>{"EU28", "FR", "CH", "NEASA"}));
  EXPECT_EQ(by_column["c_geo"], (std::set<std::string>{"EU28", "OTH", "FR"}));
  EXPECT_EQ(by_column.size(), 2u);
}

TEST(Aggregates, TwoSelectionsRemoveAllEu28Rows) {
  const auto t = read_csv(testing::fixture("aviation.csv"));
  BoundAggregates b(t, Options{});
  auto h = b.choices({})[0].next;
  EXPECT_EQ(h.constraints(), std::vector<std::string>{"remove_rows(c_geo=EU28)"});
  InteractionSet both = h.with(b.canonical_constraint("remove_rows(c_regis=EU28)"));
  auto out = b.apply(b.best(both));
  for (std::size_t r = 0; r < out.n_rows(); ++r)
    for (const auto& cell : out.row(r)) EXPECT_NE(cell, "EU28");
  EXPECT_EQ(out.n_rows(), t.n_rows() - 4);

  // Nothing left violates an 8-sigma bound.
  for (const auto& column : out.columns())
    if (column.kind() == ColumnKind::numeric)
      EXPECT_TRUE(detect_outliers(column.numeric_view(), 8.0).values.empty()) << column.name();
}

TEST(Aggregates, LabelsEncodingAndEdgeCases) {
  const auto t = read_csv(testing::fixture("aviation.csv"));
  BoundAggregates b(t, Options{});
  EXPECT_EQ(b.choices({})[1].label.rfind("Remove rows where ", 0), 0u);
  EXPECT_THROW(b.canonical_constraint("remove_rows(nope=EU28)"), Error);
  EXPECT_THROW(b.canonical_constraint("remove_value(3)"), Error);
  EXPECT_EQ(parse_remove_rows(remove_rows_constraint("a=b", "x=y")),
            (std::pair<std::string, std::string>{"a=b", "x=y"}));

  Table one({Column("A", {"x", "p", "p", "p", "p", "p", "p", "p", "p", "p", "p", "p"}),
             Column("B", {"y", "q", "q", "q", "q", "q", "q", "q", "q", "q", "q", "q"}),
             Column("n", {"1000", "1", "2", "1", "2", "1", "2", "1", "2", "1", "2", "1"})});
  auto filters = collect_aggregate_filters(one, 3.0);
  ASSERT_EQ(filters.size(), 2u);
  EXPECT_EQ(filters[0], (AggregateFilter{"A", "x", 1}));
  EXPECT_EQ(filters[1], (AggregateFilter{"B", "y", 1}));
  Table calm({Column("A", {"a", "b"}), Column("n", {"1", "2"})});
  EXPECT_TRUE(collect_aggregate_filters(calm, 3.0).empty());
}

}  // namespace
}  // namespace wrangle::outlier
