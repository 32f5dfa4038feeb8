#include "wrangle/semantic.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <sstream>

#include "wrangle/encoding.hpp"
#include "wrangle/error.hpp"

namespace wrangle::semantic {

namespace {

std::string normalize(std::string_view value) { return to_lower(trim(value)); }

std::string describe(const Sample& sample) {
  std::string out = "{";
  for (std::size_t k = 0; k < sample.size(); ++k) {
    if (k > 0) out += ", ";
    out += sample[k];
  }
  return out + "}";
}

}  // namespace

std::vector<Sample> draw_samples(const std::vector<std::string>& cells, std::size_t n_samples,
                                 std::size_t sample_size, std::uint64_t seed) {
  std::vector<std::string> distinct;
  for (const auto& cell : cells)
    if (std::find(distinct.begin(), distinct.end(), cell) == distinct.end()) distinct.push_back(cell);
  if (distinct.empty()) throw Error(ErrorCode::invalid_argument, "cannot sample an empty column");
  if (sample_size == 0 || n_samples == 0)
    throw Error(ErrorCode::invalid_argument, "sample count and size must be positive");
  if (distinct.size() <= sample_size) return {distinct};

  std::mt19937_64 rng(seed);
  std::vector<std::string> pool;
  std::vector<Sample> out;
  while (out.size() < n_samples) {
    Sample sample;
    while (sample.size() < sample_size) {
      if (pool.empty()) {
        pool = distinct;
        std::shuffle(pool.begin(), pool.end(), rng);
      }
      // Skip a value already in this sample (possible right after a reshuffle).
      auto it = std::find_if(pool.begin(), pool.end(), [&](const std::string& v) {
        return std::find(sample.begin(), sample.end(), v) == sample.end();
      });
      sample.push_back(*it);
      pool.erase(it);
    }
    out.push_back(std::move(sample));
  }
  return out;
}

GazetteerScorer::GazetteerScorer(const std::vector<std::pair<std::string, std::string>>& entries) {
  for (const auto& [type, value] : entries) {
    if (!members_.count(type)) catalog_.push_back(type);
    members_[type].insert(normalize(value));
  }
}

GazetteerScorer GazetteerScorer::load(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::parse_error, path + ":" + std::to_string(number) + ": expected type<TAB>value");
    entries.emplace_back(trim(line.substr(0, tab)), line.substr(tab + 1));
  }
  return GazetteerScorer(entries);
}

std::vector<double> GazetteerScorer::score(const Sample& sample, std::size_t) const {
  std::vector<double> out;
  for (const auto& type : catalog_) {
    const auto& members = members_.at(type);
    std::size_t hits = 0;
    for (const auto& v : sample)
      if (members.count(normalize(v))) ++hits;
    out.push_back(sample.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(sample.size()));
  }
  return out;
}

TableScorer::TableScorer(std::vector<std::string> catalog, std::vector<std::vector<double>> rows)
    : catalog_(std::move(catalog)), rows_(std::move(rows)) {
  if (rows_.empty()) throw Error(ErrorCode::invalid_argument, "score table has no rows");
  for (const auto& row : rows_)
    if (row.size() != catalog_.size())
      throw Error(ErrorCode::invalid_argument, "score row does not match the catalog");
}

std::vector<double> TableScorer::score(const Sample&, std::size_t index) const {
  return rows_[std::min(index, rows_.size() - 1)];
}

double adjusted_score(const ScoreMatrix& p, const SemanticConstraints& h, std::size_t s,
                      std::size_t t) {
  if (h.is_type.count({s, t})) return 1.0;
  if (h.not_type.count({s, t})) return 0.0;
  return p.at(s).at(t);
}

double column_score(const ScoreMatrix& p, const SemanticConstraints& h, std::size_t t) {
  if (p.empty()) throw Error(ErrorCode::invalid_argument, "no samples");
  double sum = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s) sum += adjusted_score(p, h, s, t);
  return sum / static_cast<double>(p.size());
}

std::size_t parse_sample_ref(std::string_view text) {
  std::size_t index = 0;
  if (text.size() >= 2 && (text[0] == 'S' || text[0] == 's')) {
    auto [ptr, ec] = std::from_chars(text.data() + 1, text.data() + text.size(), index);
    if (ec == std::errc{} && ptr == text.data() + text.size() && index >= 1) return index - 1;
  }
  throw Error(ErrorCode::parse_error, "expected a sample reference like S1, got '" + std::string(text) + "'");
}

std::string sample_ref(std::size_t index) { return "S" + std::to_string(index + 1); }

BoundSemantic::BoundSemantic(Table table, std::size_t column,
                             std::shared_ptr<const SampleScorer> scorer, const Options& options)
    : table_(std::move(table)), column_(column), scorer_(std::move(scorer)) {
  if (scorer_->catalog().empty()) throw Error(ErrorCode::invalid_argument, "the type catalog is empty");
  epsilon_ = options.get_double("epsilon", 0.3);
  const auto n_samples = options.get_int("n_samples", 8);
  const auto size = options.get_int("sample_size", 4);
  if (n_samples <= 0 || size <= 0)
    throw Error(ErrorCode::invalid_argument, "n_samples and sample_size must be positive");
  samples_ = draw_samples(table_.column(column_).cells(), static_cast<std::size_t>(n_samples),
                          static_cast<std::size_t>(size), options.get_seed(0));
  for (std::size_t s = 0; s < samples_.size(); ++s) {
    auto row = scorer_->score(samples_[s], s);
    for (double p : row)
      if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::invalid_argument, "scores must lie in [0, 1]");
    scores_.push_back(std::move(row));
  }
}

std::size_t BoundSemantic::catalog_index(const std::string& type) const {
  const auto& c = catalog();
  auto it = std::find(c.begin(), c.end(), type);
  if (it == c.end()) throw Error(ErrorCode::parse_error, "type '" + type + "' is not in the catalog");
  return static_cast<std::size_t>(it - c.begin());
}

Constraint BoundSemantic::canonical_constraint(std::string_view text) const {
  auto body = trim(text);
  auto name = call_name(body);
  if (name != "is_type" && name != "not_type")
    throw Error(ErrorCode::parse_error, "not a semantic constraint: '" + std::string(text) + "'");
  auto call = parse_call(body, 2);
  const std::size_t s = parse_sample_ref(trim(call.args[0]));
  if (s >= samples_.size())
    throw Error(ErrorCode::parse_error, "there are only " + std::to_string(samples_.size()) + " samples");
  call.args[0] = sample_ref(s);
  call.args[1] = trim(call.args[1]);
  catalog_index(call.args[1]);
  return print_call(call);
}

SemanticConstraints BoundSemantic::resolve(const InteractionSet& h) const {
  SemanticConstraints out;
  for (const auto& raw : h.constraints()) {
    auto call = parse_call(canonical_constraint(raw), 2);
    auto key = std::make_pair(parse_sample_ref(call.args[0]), catalog_index(call.args[1]));
    (call.name == "is_type" ? out.is_type : out.not_type).insert(key);
  }
  for (const auto& key : out.is_type)
    if (out.not_type.count(key))
      throw Error(ErrorCode::conflicting_constraints, "a sample is both of and not of one type");
  return out;
}

Expression BoundSemantic::best(const InteractionSet& h) {
  const auto constraints = resolve(h);
  std::size_t winner = 0;
  double top = -1.0;
  for (std::size_t t = 0; t < catalog().size(); ++t) {
    const double q = column_score(scores_, constraints, t);
    if (q > top) {
      top = q;
      winner = t;
    }
  }
  Expression e;
  e.script = {"semantic_type=" + catalog()[winner]};
  e.score = top;
  e.payload = catalog()[winner];
  return e;
}

std::vector<Choice> BoundSemantic::choices(const InteractionSet& h) {
  const auto constraints = resolve(h);
  struct Candidate {
    std::size_t s, t;
    double p;
  };
  std::vector<Candidate> candidates;
  for (std::size_t s = 0; s < samples_.size(); ++s)
    for (std::size_t t = 0; t < catalog().size(); ++t)
      if (scores_[s][t] >= epsilon_) candidates.push_back({s, t, scores_[s][t]});
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.p > b.p; });
  std::vector<Choice> out;
  for (const auto& c : candidates) {
    if (constraints.is_type.count({c.s, c.t}) || constraints.not_type.count({c.s, c.t})) continue;
    const std::string who = "Sample " + sample_ref(c.s) + " " + describe(samples_[c.s]);
    const auto& type = catalog()[c.t];
    out.push_back(extend(h, print_call({"is_type", {sample_ref(c.s), type}}), who + " is " + type));
    out.push_back(extend(h, print_call({"not_type", {sample_ref(c.s), type}}), who + " is not " + type));
  }
  return out;
}

const std::string& BoundSemantic::type_of(const Expression& expression) {
  const auto* t = std::any_cast<std::string>(&expression.payload);
  if (!t) throw Error(ErrorCode::invalid_argument, "expression is not a semantic type");
  return *t;
}

Table BoundSemantic::apply(const Expression& expression) const {
  type_of(expression);
  return table_;
}

bool BoundSemantic::valid(const Expression& expression, const InteractionSet& h) const {
  try {
    resolve(h);
    const auto& c = catalog();
    return std::find(c.begin(), c.end(), type_of(expression)) != c.end();
  } catch (const Error&) {
    return false;
  }
}

Preview BoundSemantic::preview(const Expression& expression, const Table& output,
                               std::size_t rows) const {
  Preview p = wrangle::preview(output, rows);
  p.annotations[column_].type = type_of(expression);
  return p;
}

const AssistantDescriptor& SemanticAssistant::descriptor() const {
  static const AssistantDescriptor d{"semantic-type", "Semantic type", {"input", "gazetteer"}, "semantic"};
  return d;
}

std::unique_ptr<BoundAssistant> SemanticAssistant::bind(const Bindings& bindings,
                                                        const Options& options) const {
  check_bindings(descriptor(), bindings);
  Table table = read_csv(bindings.at("input"));
  const std::size_t column = select_column(table, options);
  auto scorer = std::make_shared<GazetteerScorer>(GazetteerScorer::load(bindings.at("gazetteer")));
  return std::make_unique<BoundSemantic>(std::move(table), column, std::move(scorer), options);
}

}  // namespace wrangle::semantic
