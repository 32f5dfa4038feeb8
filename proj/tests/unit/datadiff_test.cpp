#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wrangle/datadiff.hpp"
#include "wrangle/error.hpp"

namespace wrangle::datadiff {
namespace {

BoundDatadiff toy() {
  return BoundDatadiff(read_csv(testing::fixture("toy_input.csv")),
                       read_csv(testing::fixture("toy_reference.csv")), Options{});
}

Table numbers(const std::string& name, const std::vector<double>& values) {
  std::vector<std::string> cells;
  for (double v : values) cells.push_back(format_real(v));
  return Table({Column(name, cells)});
}

TEST(Distances, KsExamples) {
  std::vector<double> a{1, 2, 3, 4}, b{1, 2, 3, 10};
  EXPECT_DOUBLE_EQ(ks_statistic(a, a), 0.0);
  EXPECT_DOUBLE_EQ(ks_statistic(std::vector<double>{1, 2, 3}, std::vector<double>{10, 11, 12}), 1.0);
  EXPECT_DOUBLE_EQ(ks_statistic(a, b), 0.25);
  EXPECT_THROW(ks_statistic(a, std::vector<double>{}), Error);
}

TEST(Distances, TvExamples) {
  std::map<std::string, double> p{{"a", 0.5}, {"b", 0.5}}, q{{"a", 0.75}, {"b", 0.25}};
  EXPECT_DOUBLE_EQ(tv_statistic(p, p), 0.0);
  EXPECT_DOUBLE_EQ(tv_statistic(p, q), 0.25);
  EXPECT_DOUBLE_EQ(tv_statistic(p, {{"c", 1.0}}), 1.0);
}

TEST(Distances, AgreeWithDirectDefinitions) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> value(0, 9), size(1, 15);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(size(rng)), b(size(rng));
    for (auto& v : a) v = value(rng);
    for (auto& v : b) v = value(rng) * 0.5;
    EXPECT_NEAR(ks_statistic(a, b), testing::ks_direct(a, b), 1e-12);
    EXPECT_NEAR(ks_statistic(a, b), ks_statistic(b, a), 1e-15);
  }
}

TEST(Pairwise, LinearRescaleIsFound) {
  std::vector<double> r{1, 2, 3, 5, 8, 13}, i;
  for (double v : r) i.push_back(2 * v);
  auto ti = numbers("x", i), tr = numbers("y", r);
  auto p = infer_pairwise_patch(ti.column(0), tr.column(0), 3, true, Penalties{});
  ASSERT_TRUE(p.transform.has_value());
  const auto& l = std::get<Linear>(*p.transform);
  EXPECT_EQ(l.column, 4u);
  EXPECT_DOUBLE_EQ(l.a, 0.5);
  EXPECT_NEAR(l.b, 0.0, 1e-12);
  EXPECT_NEAR(p.cost, 0.1, 1e-12);

  auto raw = infer_pairwise_patch(ti.column(0), tr.column(0), 3, false, Penalties{});
  EXPECT_FALSE(raw.transform.has_value());
  EXPECT_GT(raw.cost, 0.1);
}

TEST(Pairwise, LinearMatchesMoments) {
  std::vector<double> r{-3, 0.5, 2, 7.25, 9}, i{10, 40, 41, 90, 300};
  auto ti = numbers("x", i), tr = numbers("y", r);
  auto p = infer_pairwise_patch(ti.column(0), tr.column(0), 0, true, Penalties{0.0, 0.1, 0.6, 0.6});
  ASSERT_TRUE(p.transform.has_value());
  const auto& l = std::get<Linear>(*p.transform);
  std::vector<double> moved;
  for (double v : i) moved.push_back(l.a * v + l.b);
  EXPECT_NEAR(mean(moved), mean(r), 1e-9 * std::abs(mean(r)));
  EXPECT_NEAR(population_stddev(moved), population_stddev(r), 1e-9 * population_stddev(r));
}

TEST(Pairwise, KindMismatchIsInfinite) {
  Table t = read_csv(testing::fixture("toy_input.csv"));
  auto p = infer_pairwise_patch(t.column(0), t.column(2), 0, true, Penalties{});
  EXPECT_EQ(p.cost, kInfinity);
}

TEST(Pairwise, RecodeByFrequencyRank) {
  auto mapping = rank_recode({{"Cardiff", 8.0 / 12}, {"Edinburgh", 4.0 / 12}},
                             {{"London", 8.0 / 12}, {"Edinburgh", 4.0 / 12}});
  ASSERT_EQ(mapping.size(), 1u);
  EXPECT_EQ(mapping[0], (std::pair<std::string, std::string>{"Cardiff", "London"}));
}

TEST(Datadiff, ToyRegression) {
  auto d = toy();
  auto e = d.best({});
  EXPECT_EQ(e.script, (std::vector<std::string>{"delete(3)", "permute((1,2),(2,1))",
                                                 "recode(2,[Cardiff->London])"}));
  EXPECT_NEAR(*e.score, -0.7, 1e-12);
  EXPECT_TRUE(d.valid(e, {}));
}

TEST(Datadiff, NotransformRemovesTheRecode) {
  auto d = toy();
  InteractionSet h({"notransform(2)"});
  auto e = d.best(h);
  EXPECT_EQ(e.script, (std::vector<std::string>{"delete(3)", "permute((1,2),(2,1))"}));
  EXPECT_TRUE(d.valid(e, h));
  EXPECT_FALSE(d.valid(d.best({}), h));
  // Naming the column works the same way.
  EXPECT_EQ(d.best(InteractionSet({"notransform(City)"})).script, e.script);
}

TEST(Datadiff, ToyChoices) {
  auto d = toy();
  auto choices = d.choices({});
  ASSERT_GE(choices.size(), 3u);
  EXPECT_EQ(choices[0].label, "Don't transform 'City'");
  EXPECT_EQ(choices[0].next.encode(), "notransform(City)");
  EXPECT_EQ(choices[1].label, "Don't match 'City' and 'City'");
  EXPECT_EQ(choices[2].label, "Don't match 'Name' and 'Name'");
  for (const auto& c : choices) EXPECT_TRUE(c.next.extends_by_one({}));
}

TEST(Datadiff, ToyApply) {
  auto d = toy();
  Table out = d.apply(d.best({}));
  EXPECT_EQ(out.header(), (std::vector<std::string>{"Name", "City"}));
  EXPECT_EQ(out.row(0), (std::vector<std::string>{"Alice", "London"}));
  EXPECT_EQ(out.row(2), (std::vector<std::string>{"Bill", "Edinburgh"}));
}

TEST(Datadiff, NomatchForcesDeleteAndInsert) {
  auto d = toy();
  InteractionSet h({"nomatch(City,City)"});
  auto cm = d.cost_matrix(h);
  EXPECT_EQ(cm.cost.size(), 5u);
  EXPECT_EQ(cm.cost[0][1], kInfinity);
  auto e = d.best(h);
  EXPECT_TRUE(d.valid(e, h));
  auto ps = BoundDatadiff::patches(e);
  for (auto [i, j] : ps.permute().pairs) EXPECT_FALSE(i == 1 && j == 2);
}

TEST(Datadiff, MatchPinsAPair) {
  auto d = toy();
  InteractionSet h({"match(Count,City)"});
  auto cm = d.cost_matrix(h);
  EXPECT_EQ(cm.cost[2][1], 0.0);
  EXPECT_EQ(cm.cost[0][1], kInfinity);
  auto e = d.best(h);
  EXPECT_TRUE(d.valid(e, h));
  auto pairs = BoundDatadiff::patches(e).permute().pairs;
  EXPECT_NE(std::find(pairs.begin(), pairs.end(), std::make_pair<std::size_t, std::size_t>(3, 2)),
            pairs.end());
}

TEST(Datadiff, ConflictingConstraints) {
  auto d = toy();
  try {
    d.best(InteractionSet({"match(City,City)", "nomatch(City,City)"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::conflicting_constraints);
  }
  EXPECT_THROW(d.canonical_constraint("nomatch(Nope,City)"), Error);
  EXPECT_THROW(d.canonical_constraint("fix_delimiter(,)"), Error);
}

TEST(Datadiff, ReversedPairIsNormalized) {
  auto d = toy();
  // Name exists on both sides; Count only in the input.
  EXPECT_EQ(d.canonical_constraint("nomatch(City,Count)"), "nomatch(Count,City)");
}

TEST(Datadiff, IdentityReconciliation) {
  Table t = read_csv(testing::fixture("toy_input.csv"));
  BoundDatadiff d(t, t, Options{});
  auto e = d.best({});
  EXPECT_EQ(e.script, (std::vector<std::string>{"permute((1,1),(2,2),(3,3))"}));
  EXPECT_EQ(d.apply(e), t);
  for (const auto& c : d.choices({})) EXPECT_EQ(c.label.rfind("Don't transform", 0), std::string::npos);
}

TEST(Datadiff, InsertAddsEmptyColumn) {
  Table in = parse_table("a\n1\n2\n", Dialect::rfc4180());
  Table ref = parse_table("a,b\n1,x\n2,y\n", Dialect::rfc4180());
  BoundDatadiff d(in, ref, Options{});
  auto e = d.best({});
  EXPECT_EQ(e.script, (std::vector<std::string>{"permute((1,1))", "insert(2)"}));
  Table out = d.apply(e);
  EXPECT_EQ(out.header(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(out.column(1).cells(), (std::vector<std::string>{"", ""}));
}

}  // namespace
}  // namespace wrangle::datadiff
