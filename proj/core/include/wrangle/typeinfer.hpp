#pragma once

#include <array>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wrangle/assistant.hpp"
#include "wrangle/pfsm.hpp"

namespace wrangle::ptype {

enum class PrimitiveType { boolean, integer, floating, date, string };

inline constexpr std::size_t kTypeCount = 5;
inline constexpr std::array<PrimitiveType, kTypeCount> kAllTypes = {
    PrimitiveType::boolean, PrimitiveType::integer, PrimitiveType::floating, PrimitiveType::date,
    PrimitiveType::string};

std::string_view to_string(PrimitiveType type);
/// Case-insensitive; throws parse_error.
PrimitiveType parse_type(std::string_view text);

enum class Component { valid, missing, anomaly };

// Machine indices: the five types in kAllTypes order, then these two.
inline constexpr std::size_t kMissingMachine = 5;
inline constexpr std::size_t kAnomalyMachine = 6;
inline constexpr std::size_t kMachineCount = 7;

Pfsm boolean_machine();
Pfsm integer_machine();
Pfsm float_machine();
Pfsm date_machine();
Pfsm string_machine();
Pfsm missing_machine();
Pfsm anomaly_machine();

/// All seven machines, validated, in machine-index order.
const std::array<Pfsm, kMachineCount>& standard_machines();

/// Bytes outside printable ASCII are read as '~' before scoring.
std::string normalize_value(std::string_view value);

struct MixtureWeights {
  double valid = 0.895;
  double missing = 0.07;
  double anomaly = 0.035;
};

struct ValueLikelihood {
  std::string value;
  std::size_t count = 0;
  std::array<double, kMachineCount> log_p{};
};

struct TypeExpression {
  PrimitiveType type = PrimitiveType::string;
  std::vector<std::string> missing;
  std::vector<std::string> anomalies;

  /// `type=float missing=[?] anomalies=[]`
  std::string to_string() const;
  bool operator==(const TypeExpression&) const = default;
};

struct TypeConstraints {
  std::set<PrimitiveType> excluded;
  std::set<std::string> not_missing;
  std::set<std::string> not_anomaly;

  bool clamped(const std::string& value) const {
    return not_missing.count(value) || not_anomaly.count(value);
  }
};

Constraint canonical_type_constraint(std::string_view text);
TypeConstraints resolve(const InteractionSet& h);

/// Per-unique-value machine likelihoods of one column, computed once.
class TypeModel {
 public:
  TypeModel(const std::vector<std::string>& cells, MixtureWeights weights = {});

  /// Unique values, most frequent first (ties lexicographic).
  const std::vector<ValueLikelihood>& values() const { return values_; }
  std::size_t forward_calls() const { return forward_calls_; }
  const MixtureWeights& weights() const { return weights_; }

  /// sum_u n_u log(w_v p_t(u) + w_m p_m(u) + w_a p_a(u)), with clamped values
  /// restricted to the valid term. Uniform prior, so it is omitted.
  double log_score(PrimitiveType type, const TypeConstraints& constraints = {}) const;

  /// Normalized posterior over the five types at H0.
  std::array<double, kTypeCount> posterior() const;

  Component component(const ValueLikelihood& v, PrimitiveType type,
                      const TypeConstraints& constraints = {}) const;

  /// MAP expression allowed by the constraints; throws exhausted_constraints.
  TypeExpression best(const TypeConstraints& constraints = {}) const;

 private:
  std::vector<ValueLikelihood> values_;
  MixtureWeights weights_;
  std::size_t forward_calls_ = 0;
};

class BoundTypeInfer final : public BoundAssistant {
 public:
  BoundTypeInfer(Table table, std::size_t column, const Options& options);

  Constraint canonical_constraint(std::string_view text) const override;
  Expression best(const InteractionSet& h) override;
  std::vector<Choice> choices(const InteractionSet& h) override;
  Table apply(const Expression& expression) const override;
  bool valid(const Expression& expression, const InteractionSet& h) const override;
  Preview preview(const Expression& expression, const Table& output,
                  std::size_t rows) const override;

  const TypeModel& model() const { return model_; }
  const Column& column() const { return table_.column(column_); }

  static const TypeExpression& expression_of(const Expression& expression);

 private:
  Table table_;
  std::size_t column_;
  TypeModel model_;
};

class TypeInferAssistant final : public Assistant {
 public:
  const AssistantDescriptor& descriptor() const override;
  std::unique_ptr<BoundAssistant> bind(const Bindings& bindings,
                                       const Options& options) const override;
};

}  // namespace wrangle::ptype
