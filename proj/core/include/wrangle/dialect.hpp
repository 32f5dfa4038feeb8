#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wrangle/assistant.hpp"
#include "wrangle/csv.hpp"

namespace wrangle::dialect {

enum class Slot { delimiter = 0, quote = 1, escape = 2 };

std::string_view to_string(Slot slot);

struct ScoredDialect {
  Dialect dialect;
  double pattern = 0.0;
  /// Not computed when pattern == 0 and left at the floor value.
  double type = 0.0;
  double consistency = 0.0;
};

inline constexpr double kTypeScoreFloor = 1e-3;

/// (1/|G|) * sum over row-width groups g of N_g * (L_g - 1) / L_g.
double pattern_score(const Rows& rows);

/// Empty, number, date, time, URL, email or a single alphanumeric token.
bool is_typed_cell(std::string_view cell);

/// max(floor, typed cells / cells).
double type_score(const Rows& rows);

ScoredDialect score_dialect(std::string_view text, const Dialect& dialect);

/// fix_* / not_* constraints of H, per slot.
struct DialectConstraints {
  std::array<std::optional<std::optional<char>>, 3> fixed;
  std::array<std::set<std::optional<char>>, 3> blocked;

  bool allows(const Dialect& d) const;
};

/// Throws parse_error for foreign constraints and conflicting_constraints for
/// two different fixes of one slot or a fix of a blocked character.
DialectConstraints resolve(const InteractionSet& h);

/// Canonical form of a dialect constraint, e.g. `fix_delimiter(\t)`.
Constraint canonical_dialect_constraint(std::string_view text);

/// Unconstrained candidate set drawn from the characters of `text`.
std::vector<Dialect> candidate_dialects(std::string_view text);

/// Candidates allowed by H; throws conflicting_constraints when none remain.
std::vector<Dialect> candidate_dialects(std::string_view text, const InteractionSet& h);

/// Strict weak order: higher consistency first, then the preferred
/// characters (delimiter , \t ; | then code point; quote " then none then ';
/// escape none first).
bool ranks_before(const ScoredDialect& a, const ScoredDialect& b);

class BoundDialect final : public BoundAssistant {
 public:
  BoundDialect(std::string text, const Options& options);

  Constraint canonical_constraint(std::string_view text) const override;
  Expression best(const InteractionSet& h) override;
  std::vector<Choice> choices(const InteractionSet& h) override;
  Table apply(const Expression& expression) const override;
  bool valid(const Expression& expression, const InteractionSet& h) const override;

  /// Every candidate allowed by H, best first.
  std::vector<ScoredDialect> ranking(const InteractionSet& h);
  std::string_view sample() const { return sample_; }

  static const Dialect& dialect_of(const Expression& expression);

 private:
  const ScoredDialect& score(const Dialect& d);

  std::string text_;
  std::string sample_;
  std::vector<Dialect> candidates_;
  std::map<Dialect, ScoredDialect> memo_;
};

class DialectAssistant final : public Assistant {
 public:
  const AssistantDescriptor& descriptor() const override;
  std::unique_ptr<BoundAssistant> bind(const Bindings& bindings,
                                       const Options& options) const override;
};

}  // namespace wrangle::dialect
