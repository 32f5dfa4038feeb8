#pragma once

#include <any>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wrangle/options.hpp"
#include "wrangle/table.hpp"

namespace wrangle {

/// Canonical constraint text in call form, e.g. `nomatch(Name,City)`.
using Constraint = std::string;

/// The accumulated constraints H. Insertion-ordered, duplicate-free; the
/// default-constructed set is H0.
class InteractionSet {
 public:
  InteractionSet() = default;
  explicit InteractionSet(std::vector<Constraint> constraints);

  bool empty() const { return constraints_.empty(); }
  std::size_t size() const { return constraints_.size(); }
  bool contains(std::string_view constraint) const;
  const std::vector<Constraint>& constraints() const { return constraints_; }

  /// Copy with one more constraint appended (no-op when already present).
  InteractionSet with(Constraint constraint) const;

  /// True when this set is `base` plus exactly one new constraint.
  bool extends_by_one(const InteractionSet& base) const;

  /// Constraints joined with '/'; H0 encodes as the empty string.
  std::string encode() const;
  static InteractionSet decode(std::string_view line);

  bool operator==(const InteractionSet&) const = default;

 private:
  std::vector<Constraint> constraints_;
};

/// A cleaning script e. `script` is the serialized form (one line per
/// patch/field); `payload` carries the assistant's typed expression.
struct Expression {
  std::vector<std::string> script;
  std::optional<double> score;
  std::any payload;

  std::string script_text() const;
};

struct Choice {
  std::string label;
  InteractionSet next;
};

struct Recommendation {
  Expression expression;
  Preview preview;
  std::vector<Choice> choices;
};

struct AssistantDescriptor {
  std::string id;
  std::string display_name;
  std::vector<std::string> input_slots;
  std::string constraint_grammar_id;
};

/// Dataset slot -> file path, in the caller's order.
class Bindings {
 public:
  Bindings() = default;
  Bindings(std::initializer_list<std::pair<std::string, std::string>> init) : entries_(init) {}

  void set(const std::string& slot, std::string path);
  std::optional<std::string> find(std::string_view slot) const;
  const std::string& at(std::string_view slot) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  bool operator==(const Bindings&) const = default;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// An assistant with its input data X fixed. Implementations may cache
/// per-X work (cost matrices, dialect scores, posteriors) across calls, so
/// an instance must not be used from two threads at once.
class BoundAssistant {
 public:
  virtual ~BoundAssistant() = default;

  /// Parses one constraint of this assistant's grammar and returns its
  /// canonical text; throws parse_error.
  virtual Constraint canonical_constraint(std::string_view text) const = 0;

  /// best_X(H).
  virtual Expression best(const InteractionSet& h) = 0;

  /// choices_X(H), each extending H by one constraint, most likely first.
  virtual std::vector<Choice> choices(const InteractionSet& h) = 0;

  /// f(e, X).
  virtual Table apply(const Expression& expression) const = 0;

  /// valid_H(e).
  virtual bool valid(const Expression& expression, const InteractionSet& h) const = 0;

  /// Badges shown next to the preview; defaults to column kinds.
  virtual Preview preview(const Expression& expression, const Table& output,
                          std::size_t rows) const;

  InteractionSet canonical(const InteractionSet& h) const;
};

class Assistant {
 public:
  virtual ~Assistant() = default;
  virtual const AssistantDescriptor& descriptor() const = 0;
  /// Reads the bound datasets; throws missing_binding / io_error /
  /// parse_error.
  virtual std::unique_ptr<BoundAssistant> bind(const Bindings& bindings,
                                               const Options& options) const = 0;
};

class Registry {
 public:
  void add(std::shared_ptr<const Assistant> assistant);
  /// Throws unknown_assistant.
  const Assistant& find(std::string_view id) const;
  bool contains(std::string_view id) const;
  std::vector<AssistantDescriptor> list() const;

 private:
  std::vector<std::shared_ptr<const Assistant>> assistants_;
};

/// Checks that every declared slot is bound to a readable file.
void check_bindings(const AssistantDescriptor& descriptor, const Bindings& bindings);

enum class SessionStatus { active, accepted };
std::string_view to_string(SessionStatus status);

struct FinalResult {
  Expression expression;
  Table output;
  std::string script_text;
};

/// One analyst's accept/refine loop over a bound assistant.
class Session {
 public:
  /// session_init: starts at H0 with an empty history.
  Session(std::string session_id, const Assistant& assistant, Bindings bindings,
          Options options = {});

  const std::string& id() const { return id_; }
  const AssistantDescriptor& assistant() const { return descriptor_; }
  const Bindings& bindings() const { return bindings_; }
  const Options& options() const { return options_; }
  const InteractionSet& current() const { return current_; }
  const std::vector<std::string>& history() const { return history_; }
  SessionStatus status() const { return status_; }
  std::size_t preview_rows() const { return preview_rows_; }

  /// Computes best/f/choices for the current H, or returns the cached
  /// recommendation.
  const Recommendation& step();

  /// The cached recommendation; empty after a select.
  const std::optional<Recommendation>& last() const { return last_; }

  /// Bumped every time a new recommendation is computed.
  std::uint64_t revision() const { return revision_; }

  /// Adopts the chosen InteractionSet. Throws stale_choice when no
  /// recommendation is cached (or `expected_revision` does not match) and
  /// out_of_range for a bad index.
  void select(std::size_t index, std::optional<std::uint64_t> expected_revision = {});

  /// Adds `constraint` (canonicalized) to H directly, as replay and
  /// command-line constraints do. Throws parse_error for foreign grammar.
  void select_constraint(std::string_view constraint);

  FinalResult accept();
  const std::optional<FinalResult>& result() const { return result_; }

  BoundAssistant& bound() { return *bound_; }

 private:
  void ensure_active() const;

  std::string id_;
  AssistantDescriptor descriptor_;
  Bindings bindings_;
  Options options_;
  std::unique_ptr<BoundAssistant> bound_;
  InteractionSet current_;
  std::vector<std::string> history_;
  SessionStatus status_ = SessionStatus::active;
  std::optional<Recommendation> last_;
  std::optional<FinalResult> result_;
  std::uint64_t revision_ = 0;
  std::size_t preview_rows_ = 10;
};

/// Resolves the `column` option of single-column assistants: a column name
/// or a 1-based index; the first column when unset. Throws invalid_argument.
std::size_t select_column(const Table& table, const Options& options);

/// Helper for assistants: a choice that adds `constraint` to `h`.
Choice extend(const InteractionSet& h, Constraint constraint, std::string label);

}  // namespace wrangle
