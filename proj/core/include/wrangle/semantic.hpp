#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "wrangle/assistant.hpp"

namespace wrangle::semantic {

/// Distinct column values scored together.
using Sample = std::vector<std::string>;

/// Shuffles the distinct values with `seed` and cuts consecutive chunks of
/// `sample_size`, reshuffling whenever the values run out, so a value never
/// repeats inside a sample but may recur across samples. With at most
/// `sample_size` distinct values the result is a single sample of all of them.
std::vector<Sample> draw_samples(const std::vector<std::string>& cells, std::size_t n_samples,
                                 std::size_t sample_size, std::uint64_t seed);

/// Backend that predicts p[S][sigma] in [0, 1].
class SampleScorer {
 public:
  virtual ~SampleScorer() = default;
  virtual std::string id() const = 0;
  virtual const std::vector<std::string>& catalog() const = 0;
  /// Scores of `sample` (the `index`-th sample, 0-based) in catalog order.
  virtual std::vector<double> score(const Sample& sample, std::size_t index) const = 0;
};

/// Fraction of sample values listed under each type, compared
/// case-insensitively after trimming.
class GazetteerScorer final : public SampleScorer {
 public:
  /// Reads `type<TAB>value` lines; types form the catalog in order of first
  /// appearance. Throws io_error / parse_error.
  static GazetteerScorer load(const std::string& path);
  explicit GazetteerScorer(const std::vector<std::pair<std::string, std::string>>& entries);

  std::string id() const override { return "gazetteer"; }
  const std::vector<std::string>& catalog() const override { return catalog_; }
  std::vector<double> score(const Sample& sample, std::size_t index) const override;

 private:
  std::vector<std::string> catalog_;
  std::map<std::string, std::set<std::string>> members_;
};

/// Same score for every sample and type.
class ConstantScorer final : public SampleScorer {
 public:
  ConstantScorer(std::vector<std::string> catalog, double value)
      : catalog_(std::move(catalog)), value_(value) {}
  std::string id() const override { return "constant"; }
  const std::vector<std::string>& catalog() const override { return catalog_; }
  std::vector<double> score(const Sample&, std::size_t) const override {
    return std::vector<double>(catalog_.size(), value_);
  }

 private:
  std::vector<std::string> catalog_;
  double value_;
};

/// Explicit per-sample rows; samples beyond the table reuse the last row.
class TableScorer final : public SampleScorer {
 public:
  TableScorer(std::vector<std::string> catalog, std::vector<std::vector<double>> rows);
  std::string id() const override { return "table"; }
  const std::vector<std::string>& catalog() const override { return catalog_; }
  std::vector<double> score(const Sample& sample, std::size_t index) const override;

 private:
  std::vector<std::string> catalog_;
  std::vector<std::vector<double>> rows_;
};

using ScoreMatrix = std::vector<std::vector<double>>;

/// Overrides of H, keyed by (sample index, catalog index).
struct SemanticConstraints {
  std::set<std::pair<std::size_t, std::size_t>> is_type;
  std::set<std::pair<std::size_t, std::size_t>> not_type;
};

/// q: 1 under is_type, 0 under not_type, otherwise p[s][t].
double adjusted_score(const ScoreMatrix& p, const SemanticConstraints& h, std::size_t s,
                      std::size_t t);
/// Mean of q over samples.
double column_score(const ScoreMatrix& p, const SemanticConstraints& h, std::size_t t);

/// `S3` -> 2. Throws parse_error.
std::size_t parse_sample_ref(std::string_view text);
std::string sample_ref(std::size_t index);

class BoundSemantic final : public BoundAssistant {
 public:
  BoundSemantic(Table table, std::size_t column, std::shared_ptr<const SampleScorer> scorer,
                const Options& options);

  Constraint canonical_constraint(std::string_view text) const override;
  Expression best(const InteractionSet& h) override;
  std::vector<Choice> choices(const InteractionSet& h) override;
  Table apply(const Expression& expression) const override;
  bool valid(const Expression& expression, const InteractionSet& h) const override;
  Preview preview(const Expression& expression, const Table& output,
                  std::size_t rows) const override;

  SemanticConstraints resolve(const InteractionSet& h) const;
  const std::vector<Sample>& samples() const { return samples_; }
  const ScoreMatrix& scores() const { return scores_; }
  const std::vector<std::string>& catalog() const { return scorer_->catalog(); }
  double epsilon() const { return epsilon_; }

  static const std::string& type_of(const Expression& expression);

 private:
  std::size_t catalog_index(const std::string& type) const;

  Table table_;
  std::size_t column_;
  std::shared_ptr<const SampleScorer> scorer_;
  std::vector<Sample> samples_;
  ScoreMatrix scores_;
  double epsilon_ = 0.3;
};

class SemanticAssistant final : public Assistant {
 public:
  const AssistantDescriptor& descriptor() const override;
  std::unique_ptr<BoundAssistant> bind(const Bindings& bindings,
                                       const Options& options) const override;
};

}  // namespace wrangle::semantic
