#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "wrangle/dialect.hpp"
#include "wrangle/error.hpp"

namespace wrangle::dialect {
namespace {

BoundDialect bound(const std::string& name) {
  return BoundDialect(read_file(testing::fixture(name)), Options{});
}

TEST(PatternScore, Examples) {
  Rows four_by_three(4, std::vector<std::string>(3, "x"));
  EXPECT_DOUBLE_EQ(pattern_score(four_by_three), 8.0 / 3.0);
  Rows single(4, std::vector<std::string>(1, "x"));
  EXPECT_DOUBLE_EQ(pattern_score(single), 0.0);
  Rows ragged{{"a", "b", "c"}, {"a", "b", "c"}, {"a", "b"}};
  EXPECT_DOUBLE_EQ(pattern_score(ragged), 11.0 / 12.0);
}

TEST(TypeScore, Detectors) {
  for (const char* typed : {"", "12", "-3.5e2", "2019-01-31", "31/01/2019", "22:34:00", "7:05 pm",
                            "https://example.org/x", "a.b@example.com", "abc_12"})
    EXPECT_TRUE(is_typed_cell(typed)) << typed;
  for (const char* untyped : {"{\"name\":\"John\"}", "00,01", "Atlantic City", "1894_0.jpg", "51,47,45"})
    EXPECT_FALSE(is_typed_cell(untyped)) << untyped;
  EXPECT_DOUBLE_EQ(type_score({{"1", "2"}}), 1.0);
  EXPECT_DOUBLE_EQ(type_score({{"a b", "c d"}}), kTypeScoreFloor);
  EXPECT_DOUBLE_EQ(type_score({{"1", "a b"}}), 0.5);
}

TEST(Candidates, SimpleText) {
  auto c = candidate_dialects("a,b\n1,2\n");
  for (const auto& d : c) {
    EXPECT_FALSE(d.quote.has_value());
    EXPECT_FALSE(d.escape.has_value());
  }
  EXPECT_EQ(c.size(), 2u);
  EXPECT_THROW(candidate_dialects("a,b\n", InteractionSet({"fix_delimiter(,)", "not_delimiter(,)"})),
               Error);
}

TEST(Candidates, EscapeNeedsASpecialNeighbour) {
  auto has_escape = [](const std::vector<Dialect>& ds) {
    return std::any_of(ds.begin(), ds.end(), [](const Dialect& d) { return d.escape.has_value(); });
  };
  EXPECT_TRUE(has_escape(candidate_dialects("a\\,b,c\n")));
  EXPECT_FALSE(has_escape(candidate_dialects("C:\\temp,c\n")));
}

TEST(Dialect, JsonCellsRanking) {
  auto d = bound("json_cells.csv");
  auto ranked = d.ranking({});
  ASSERT_GE(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].dialect, (Dialect{':', '"', std::nullopt}));
  EXPECT_DOUBLE_EQ(ranked[0].consistency, 3.2 * 0.6);
  EXPECT_EQ(ranked[1].dialect, (Dialect{',', '"', std::nullopt}));
  EXPECT_DOUBLE_EQ(ranked[1].consistency, 16.0 / 9.0);
  for (const auto& sd : ranked) EXPECT_EQ(sd.consistency, sd.pattern * sd.type);

  auto choices = d.choices({});
  auto first_fix = std::find_if(choices.begin(), choices.end(), [](const Choice& c) {
    return c.next.constraints().back().rfind("fix_", 0) == 0;
  });
  ASSERT_NE(first_fix, choices.end());
  EXPECT_EQ(first_fix->next.constraints().back(), "fix_delimiter(,)");
  EXPECT_EQ(first_fix->label, "Use ',' as the delimiter");

  auto fixed = d.best(first_fix->next);
  EXPECT_EQ(BoundDialect::dialect_of(fixed), (Dialect{',', '"', std::nullopt}));
  Table t = d.apply(fixed);
  EXPECT_EQ(t.n_columns(), 3u);
  EXPECT_EQ(t.header()[0], "{\"name\":\"John\",\"age\":\"28\"}");
}

TEST(Dialect, ColorsWithTab) {
  auto d = bound("colors.tsv");
  InteractionSet h({d.canonical_constraint("fix_delimiter(TAB)")});
  EXPECT_EQ(h.constraints().front(), "fix_delimiter(\\t)");
  auto e = d.best(h);
  EXPECT_EQ(BoundDialect::dialect_of(e).delimiter, '\t');
  for (const auto& row : parse_with_dialect(d.sample(), BoundDialect::dialect_of(e)))
    EXPECT_EQ(row.size(), 4u);
}

TEST(Dialect, FixedSlotOffersNothingMore) {
  auto d = bound("json_cells.csv");
  InteractionSet h({"fix_delimiter(,)"});
  for (const auto& c : d.choices(h)) {
    const auto& added = c.next.constraints().back();
    EXPECT_EQ(added.find("delimiter"), std::string::npos) << added;
    EXPECT_TRUE(c.next.extends_by_one(h));
  }
}

TEST(Dialect, ValidChecksConstraints) {
  auto d = bound("json_cells.csv");
  auto e = d.best({});
  EXPECT_TRUE(d.valid(e, {}));
  EXPECT_FALSE(d.valid(e, InteractionSet({"not_delimiter(:)"})));
  EXPECT_EQ(d.best(InteractionSet({"not_delimiter(:)"})).script.front(),
            "delimiter=, quote=\" escape=none");
}

TEST(Dialect, MovieEscapes) {
  auto text = read_file(testing::fixture("movies_excerpt.csv"));
  auto escaped = parse_with_dialect(text, Dialect{',', std::nullopt, '\\'});
  EXPECT_EQ(escaped.size(), 101u);
  for (const auto& row : escaped) EXPECT_EQ(row.size(), 3u);
  EXPECT_EQ(escaped[4][1], "Atlantic City,USA (1980)");
}

}  // namespace
}  // namespace wrangle::dialect
