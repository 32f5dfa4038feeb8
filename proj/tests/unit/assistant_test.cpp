#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "wrangle/assistant.hpp"
#include "wrangle/encoding.hpp"
#include "wrangle/error.hpp"

namespace wrangle {
namespace {

// Offers `step(k)` for the next two k; the expression counts the steps.
class CountingBound final : public BoundAssistant {
 public:
  Constraint canonical_constraint(std::string_view text) const override {
    auto call = parse_call(trim(text), 1);
    if (call.name != "step") throw Error(ErrorCode::parse_error, "not a step");
    return print_call(call);
  }
  Expression best(const InteractionSet& h) override {
    ++best_calls;
    return Expression{{"steps=" + std::to_string(h.size())}, -static_cast<double>(h.size()), {}};
  }
  std::vector<Choice> choices(const InteractionSet& h) override {
    std::vector<Choice> out;
    for (std::size_t k = h.size(); k < h.size() + 2; ++k)
      out.push_back(extend(h, "step(" + std::to_string(k) + ")", "Step " + std::to_string(k)));
    return out;
  }
  Table apply(const Expression& e) const override {
    return Table({Column("steps", {e.script.front()})});
  }
  bool valid(const Expression&, const InteractionSet&) const override { return true; }

  int best_calls = 0;
};

class CountingAssistant final : public Assistant {
 public:
  const AssistantDescriptor& descriptor() const override {
    static const AssistantDescriptor d{"counting", "Counting", {"input"}, "counting"};
    return d;
  }
  std::unique_ptr<BoundAssistant> bind(const Bindings&, const Options&) const override {
    return std::make_unique<CountingBound>();
  }
};

Bindings toy_bindings() { return Bindings{{"input", testing::fixture("toy_input.csv")}}; }

TEST(InteractionSet, OrderedAndDuplicateFree) {
  InteractionSet h;
  auto h1 = h.with("a()").with("b()").with("a()");
  EXPECT_EQ(h1.constraints(), (std::vector<std::string>{"a()", "b()"}));
  EXPECT_TRUE(h1.with("c()").extends_by_one(h1));
  EXPECT_FALSE(h1.extends_by_one(h));
  EXPECT_EQ(InteractionSet::decode(h1.encode()), h1);
  EXPECT_EQ(InteractionSet::decode(""), InteractionSet{});
}

TEST(Session, StepIsCachedUntilSelect) {
  CountingAssistant assistant;
  Session s("s1", assistant, toy_bindings());
  const auto& rec = s.step();
  EXPECT_EQ(rec.expression.script.front(), "steps=0");
  auto revision = s.revision();
  s.step();
  EXPECT_EQ(s.revision(), revision);
  EXPECT_EQ(static_cast<CountingBound&>(s.bound()).best_calls, 1);
  s.select(1, revision);
  EXPECT_EQ(s.history(), (std::vector<std::string>{"step(1)"}));
  EXPECT_EQ(s.step().expression.script.front(), "steps=1");
}

TEST(Session, StaleAndOutOfRangeChoices) {
  CountingAssistant assistant;
  Session s("s1", assistant, toy_bindings());
  try {
    s.select(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::stale_choice);
  }
  s.step();
  try {
    s.select(0, s.revision() + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::stale_choice);
  }
  try {
    s.select(5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::out_of_range);
  }
}

TEST(Session, AcceptClosesTheSession) {
  CountingAssistant assistant;
  Session s("s1", assistant, toy_bindings());
  EXPECT_THROW(s.accept(), Error);
  s.step();
  s.select(0);
  s.step();
  auto result = s.accept();
  EXPECT_EQ(result.script_text, "steps=1\n");
  EXPECT_EQ(s.status(), SessionStatus::accepted);
  try {
    s.select(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::session_closed);
  }
}

TEST(Session, SelectConstraintCanonicalizes) {
  CountingAssistant assistant;
  Session s("s1", assistant, toy_bindings());
  s.select_constraint("  step(7) ");
  EXPECT_EQ(s.current().constraints(), (std::vector<std::string>{"step(7)"}));
  EXPECT_THROW(s.select_constraint("jump(1)"), Error);
}

TEST(Session, MissingBindingIsReported) {
  CountingAssistant assistant;
  try {
    Session s("s1", assistant, Bindings{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::missing_binding);
  }
}

TEST(Registry, UnknownAssistant) {
  Registry r;
  r.add(std::make_shared<CountingAssistant>());
  EXPECT_TRUE(r.contains("counting"));
  EXPECT_EQ(r.list().size(), 1u);
  try {
    r.find("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::unknown_assistant);
  }
}

}  // namespace
}  // namespace wrangle
