#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wrangle/assignment.hpp"
#include "wrangle/assistant.hpp"

namespace wrangle::datadiff {

/// Kolmogorov-Smirnov statistic: sup over the pooled support of |F_a - F_b|.
/// Throws invalid_argument when either sample is empty.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Total variation: half the L1 distance over the union of categories.
double tv_statistic(const std::map<std::string, double>& p, const std::map<std::string, double>& q);

// Column indices in patches are 1-based. delete names an input column,
// insert/recode/linear name a reference (output) position.
struct Recode {
  std::size_t column = 0;
  std::vector<std::pair<std::string, std::string>> mapping;
  bool operator==(const Recode&) const = default;
};
struct Linear {
  std::size_t column = 0;
  double a = 1.0;
  double b = 0.0;
  bool operator==(const Linear&) const = default;
};
struct Delete {
  std::size_t column = 0;
  bool operator==(const Delete&) const = default;
};
struct Insert {
  std::size_t column = 0;
  bool operator==(const Insert&) const = default;
};
/// (input, reference) pairs sorted by input index.
struct Permute {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  bool operator==(const Permute&) const = default;
};

using Patch = std::variant<Recode, Linear, Delete, Insert, Permute>;

std::string to_string(const Patch& patch);

/// Patches in script order: deletes, the permute, transforms, inserts.
struct PatchSet {
  std::vector<Patch> patches;

  const Permute& permute() const;
  std::vector<std::size_t> deletes() const;
  std::vector<std::size_t> inserts() const;
  /// Reference positions carrying a recode or linear patch.
  std::vector<std::size_t> transformed() const;
  std::vector<std::string> script() const;

  bool operator==(const PatchSet&) const = default;
};

/// Applies delete -> permute -> recode/linear -> insert. The output takes the
/// reference header; recode leaves values without a mapping entry unchanged.
Table apply_patches(const PatchSet& patches, const Table& input, const Table& reference);

struct Penalties {
  double linear = 0.1;
  double recode = 0.1;
  double insert = 0.6;
  double del = 0.6;
};

struct PairwisePatch {
  std::optional<Patch> transform;
  double cost = kInfinity;
};

/// Cost of matching col_i to col_r (reference position `ref_index`), with
/// the transformed alternative considered only when `allow_transform`.
PairwisePatch infer_pairwise_patch(const Column& col_i, const Column& col_r,
                                   std::size_t ref_index, bool allow_transform,
                                   const Penalties& penalties);

/// Rank-aligned recode of input categories onto reference categories;
/// identity entries are omitted.
std::vector<std::pair<std::string, std::string>> rank_recode(
    const std::map<std::string, double>& input, const std::map<std::string, double>& reference);

/// Constraints of H resolved against the two tables (0-based indices).
struct Resolved {
  std::set<std::size_t> frozen_inputs;
  std::set<std::size_t> frozen_references;
  std::set<std::pair<std::size_t, std::size_t>> match;
  std::set<std::pair<std::size_t, std::size_t>> nomatch;

  bool frozen(std::size_t i, std::size_t j) const {
    return frozen_inputs.count(i) || frozen_references.count(j);
  }
};

/// Padded (n_i + n_r) square matrix: input rows then insert rows, reference
/// columns then delete columns.
struct CostMatrix {
  std::size_t n_input = 0;
  std::size_t n_reference = 0;
  CostGrid cost;
  std::vector<std::vector<std::optional<Patch>>> patch_for;
};

class BoundDatadiff final : public BoundAssistant {
 public:
  BoundDatadiff(Table input, Table reference, const Options& options);

  Constraint canonical_constraint(std::string_view text) const override;
  Expression best(const InteractionSet& h) override;
  std::vector<Choice> choices(const InteractionSet& h) override;
  Table apply(const Expression& expression) const override;
  bool valid(const Expression& expression, const InteractionSet& h) const override;

  Resolved resolve(const InteractionSet& h) const;
  CostMatrix cost_matrix(const InteractionSet& h);
  PatchSet best_patches(const InteractionSet& h);

  const Table& input() const { return input_; }
  const Table& reference() const { return reference_; }
  const Penalties& penalties() const { return penalties_; }

  static const PatchSet& patches(const Expression& expression);

 private:
  struct PairCache {
    PairwisePatch raw;
    PairwisePatch transformed;
  };

  const PairCache& pair(std::size_t i, std::size_t j);
  std::size_t resolve_input(const std::string& token) const;
  std::size_t resolve_reference(const std::string& token) const;
  std::optional<std::size_t> find_input(const std::string& token) const;
  std::optional<std::size_t> find_reference(const std::string& token) const;

  Table input_;
  Table reference_;
  Table input_sample_;
  Table reference_sample_;
  Penalties penalties_;
  std::vector<std::optional<PairCache>> cache_;
  std::size_t max_choices_ = 25;
};

class DatadiffAssistant final : public Assistant {
 public:
  const AssistantDescriptor& descriptor() const override;
  std::unique_ptr<BoundAssistant> bind(const Bindings& bindings,
                                       const Options& options) const override;
};

}  // namespace wrangle::datadiff
