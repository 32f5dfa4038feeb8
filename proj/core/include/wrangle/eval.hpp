#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wrangle/csv.hpp"
#include "wrangle/datadiff.hpp"
#include "wrangle/typeinfer.hpp"

namespace wrangle::eval {

/// 5 columns: four per-species normal measurements (1 decimal) and a
/// 3-level species column.
Table iris_like(std::size_t rows, std::uint64_t seed);

/// 12 columns mixing skewed integers and categoricals of 2 to 16 levels.
Table adult_like(std::size_t rows, std::uint64_t seed);

enum class CorruptionKind { insert_numeric, insert_categorical, delete_column, recode, linear };
std::string_view to_string(CorruptionKind kind);

enum class CorruptionMode {
  /// Reorder plus two of insert_numeric, insert_categorical, delete_column.
  structural,
  /// Reorder plus two of all five kinds.
  all,
};

struct CorruptionCase {
  std::uint64_t seed = 0;
  /// The corrupted half with anonymized column names (datadiff input).
  Table corrupted;
  /// The untouched half (datadiff reference).
  Table clean;
  /// The corrupted half's rows before corruption, in reference layout.
  Table original;
  std::vector<CorruptionKind> applied;
  /// Per reference column, the 0-based corrupted column it comes from.
  std::vector<std::optional<std::size_t>> source;
  /// Patches that undo the corruption.
  datadiff::PatchSet truth;
  /// Only for linear: the (a, b) that produced each corrupted column.
  std::vector<std::pair<double, double>> linear_params;
};

/// Splits rows 50/50 by `seed`, reorders the columns of one half and
/// applies two corruptions to distinct columns. Throws invalid_argument for
/// fewer than 4 columns or 40 rows.
CorruptionCase corrupt(const Table& table, std::uint64_t seed, CorruptionMode mode);

/// Interactions until the recommendation matched the target, or nullopt
/// when the cap was hit or no choice contradicted a discrepancy.
struct Trace {
  std::string assistant;
  std::size_t case_id = 0;
  std::optional<std::size_t> interactions;
  std::vector<Constraint> chosen;
};

/// Oracle analyst for datadiff: success is the ground-truth matching,
/// deletes and inserts. Discrepancies are taken in reference-column order;
/// for each it prefers matching a misplaced input to its true home, then
/// `notransform` on a spurious transform, then `nomatch` on the wrong pair,
/// then `match` on the true source, whichever is offered first.
Trace drive_datadiff(const CorruptionCase& c, std::size_t case_id, const Options& options = {},
                     std::size_t cap = 10);

/// Oracle analyst for csv-dialect: fixes the first wrong slot.
Trace drive_dialect(const std::string& text, const Dialect& target, std::size_t case_id,
                    const Options& options = {}, std::size_t cap = 10);

/// Oracle analyst for ptype: excludes the recommended type until it is
/// the target.
Trace drive_ptype(const Table& table, std::size_t column, ptype::PrimitiveType target,
                  std::size_t case_id, const Options& options = {}, std::size_t cap = 10);

/// A delimited file written in a random dialect that is guaranteed to be in
/// the candidate set of its own text.
struct DialectFixture {
  std::string text;
  Dialect target;
};
DialectFixture dialect_fixture(std::uint64_t seed);

/// A column of one type with a few missing markers and anomalies.
struct TypeFixture {
  Table table;
  ptype::PrimitiveType target;
};
TypeFixture type_fixture(std::uint64_t seed);

struct Report {
  std::string assistant;
  std::size_t cases = 0;
  /// Fractions solved with 0, 1, 2, 3 and 4+ interactions.
  std::array<double, 5> fractions{};
  double dnf = 0.0;
  /// Mean interactions over solved cases that needed at least one.
  std::optional<double> average;

  std::string to_csv() const;
  std::string to_text() const;
};

/// Throws invalid_argument for no traces.
Report report(const std::vector<Trace>& traces);

struct EvalConfig {
  std::string assistant = "datadiff";
  std::size_t cases = 100;
  std::uint64_t seed = 7;
  CorruptionMode mode = CorruptionMode::all;
  std::size_t cap = 10;
  /// 0 picks the hardware concurrency.
  std::size_t threads = 0;
  Options options;
};

/// Runs the seeded cases of one assistant (datadiff, csv-dialect or
/// ptype) in parallel; traces come back in case order.
std::vector<Trace> run_eval(const EvalConfig& config);

}  // namespace wrangle::eval
