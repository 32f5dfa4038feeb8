#include "wrangle/datadiff.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>

#include "wrangle/encoding.hpp"
#include "wrangle/error.hpp"

namespace wrangle::datadiff {

namespace {

// Collapses floating noise left by a linear transform so that values which
// agree to 12 significant digits land on the same support point.
double snap(double x) {
  std::array<char, 40> buffer{};
  auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), x,
                                 std::chars_format::general, 12);
  double out = x;
  std::from_chars(buffer.data(), end, out);
  return out;
}

std::vector<double> snapped(std::span<const double> values, double a = 1.0, double b = 0.0) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(snap(a * v + b));
  return out;
}

std::map<std::string, double> remap(const std::map<std::string, double>& freq,
                                    const std::vector<std::pair<std::string, std::string>>& mapping) {
  std::map<std::string, std::string> lookup(mapping.begin(), mapping.end());
  std::map<std::string, double> out;
  for (const auto& [value, p] : freq) {
    auto it = lookup.find(value);
    out[it == lookup.end() ? value : it->second] += p;
  }
  return out;
}

std::vector<std::string> by_rank(const std::map<std::string, double>& freq) {
  std::vector<std::string> out;
  for (const auto& [value, p] : freq) out.push_back(value);
  // std::map already iterates lexicographically, so a stable sort keeps
  // ties in that order.
  std::stable_sort(out.begin(), out.end(),
                   [&](const std::string& x, const std::string& y) { return freq.at(x) > freq.at(y); });
  return out;
}

Table sample_rows(const Table& table, std::size_t cap, std::uint64_t seed) {
  if (cap == 0 || table.n_rows() <= cap) return table;
  std::vector<std::size_t> rows(table.n_rows());
  std::iota(rows.begin(), rows.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(rows.begin(), rows.end(), rng);
  rows.resize(cap);
  std::sort(rows.begin(), rows.end());
  std::vector<Column> columns;
  for (const auto& column : table.columns()) {
    std::vector<std::string> cells;
    cells.reserve(cap);
    for (auto r : rows) cells.push_back(column.cells()[r]);
    columns.emplace_back(column.name(), std::move(cells));
  }
  return Table(std::move(columns));
}

std::optional<std::size_t> parse_index(const std::string& token, std::size_t n) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || value == 0 || value > n)
    return std::nullopt;
  return value - 1;
}

std::string quoted(const std::string& name) { return "'" + name + "'"; }

}  // namespace

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw Error(ErrorCode::invalid_argument, "KS statistic needs two non-empty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < x.size() || j < y.size()) {
    double point;
    if (j >= y.size() || (i < x.size() && x[i] <= y[j]))
      point = x[i];
    else
      point = y[j];
    while (i < x.size() && x[i] <= point) ++i;
    while (j < y.size() && y[j] <= point) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return best;
}

double tv_statistic(const std::map<std::string, double>& p, const std::map<std::string, double>& q) {
  double sum = 0.0;
  auto pi = p.begin();
  auto qi = q.begin();
  while (pi != p.end() || qi != q.end()) {
    if (qi == q.end() || (pi != p.end() && pi->first < qi->first)) {
      sum += std::abs(pi->second);
      ++pi;
    } else if (pi == p.end() || qi->first < pi->first) {
      sum += std::abs(qi->second);
      ++qi;
    } else {
      sum += std::abs(pi->second - qi->second);
      ++pi;
      ++qi;
    }
  }
  return 0.5 * sum;
}

std::string to_string(const Patch& patch) {
  struct Printer {
    std::string operator()(const Recode& r) const {
      std::string out = "recode(" + std::to_string(r.column) + ",[";
      for (std::size_t k = 0; k < r.mapping.size(); ++k) {
        if (k > 0) out += ',';
        out += r.mapping[k].first + "->" + r.mapping[k].second;
      }
      return out + "])";
    }
    std::string operator()(const Linear& l) const {
      return "linear(" + std::to_string(l.column) + "," + format_real(l.a) + "," +
             format_real(l.b) + ")";
    }
    std::string operator()(const Delete& d) const { return "delete(" + std::to_string(d.column) + ")"; }
    std::string operator()(const Insert& i) const { return "insert(" + std::to_string(i.column) + ")"; }
    std::string operator()(const Permute& p) const {
      std::string out = "permute(";
      for (std::size_t k = 0; k < p.pairs.size(); ++k) {
        if (k > 0) out += ',';
        out += "(" + std::to_string(p.pairs[k].first) + "," + std::to_string(p.pairs[k].second) + ")";
      }
      return out + ")";
    }
  };
  return std::visit(Printer{}, patch);
}

const Permute& PatchSet::permute() const {
  static const Permute empty;
  for (const auto& patch : patches)
    if (auto* p = std::get_if<Permute>(&patch)) return *p;
  return empty;
}

std::vector<std::size_t> PatchSet::deletes() const {
  std::vector<std::size_t> out;
  for (const auto& patch : patches)
    if (auto* d = std::get_if<Delete>(&patch)) out.push_back(d->column);
  return out;
}

std::vector<std::size_t> PatchSet::inserts() const {
  std::vector<std::size_t> out;
  for (const auto& patch : patches)
    if (auto* i = std::get_if<Insert>(&patch)) out.push_back(i->column);
  return out;
}

std::vector<std::size_t> PatchSet::transformed() const {
  std::vector<std::size_t> out;
  for (const auto& patch : patches) {
    if (auto* r = std::get_if<Recode>(&patch)) out.push_back(r->column);
    if (auto* l = std::get_if<Linear>(&patch)) out.push_back(l->column);
  }
  return out;
}

std::vector<std::string> PatchSet::script() const {
  std::vector<std::string> out;
  for (const auto& patch : patches) out.push_back(to_string(patch));
  return out;
}

Table apply_patches(const PatchSet& patches, const Table& input, const Table& reference) {
  const std::size_t rows = input.n_rows();
  std::vector<std::optional<std::size_t>> source(reference.n_columns());
  for (auto [i, j] : patches.permute().pairs) {
    if (i == 0 || i > input.n_columns() || j == 0 || j > reference.n_columns())
      throw Error(ErrorCode::invalid_argument, "permute pair out of range");
    source[j - 1] = i - 1;
  }
  std::vector<std::vector<std::string>> cells(reference.n_columns());
  for (std::size_t j = 0; j < reference.n_columns(); ++j) {
    if (source[j])
      cells[j] = input.column(*source[j]).cells();
    else
      cells[j].assign(rows, std::string());
  }
  for (const auto& patch : patches.patches) {
    if (auto* r = std::get_if<Recode>(&patch)) {
      if (r->column == 0 || r->column > cells.size())
        throw Error(ErrorCode::invalid_argument, "recode column out of range");
      std::map<std::string, std::string> lookup(r->mapping.begin(), r->mapping.end());
      for (auto& cell : cells[r->column - 1]) {
        auto it = lookup.find(cell);
        if (it != lookup.end()) cell = it->second;
      }
    } else if (auto* l = std::get_if<Linear>(&patch)) {
      if (l->column == 0 || l->column > cells.size())
        throw Error(ErrorCode::invalid_argument, "linear column out of range");
      for (auto& cell : cells[l->column - 1]) {
        if (is_missing(cell)) continue;
        if (auto x = parse_real(cell)) cell = format_real(snap(l->a * *x + l->b));
      }
    }
  }
  std::vector<Column> columns;
  for (std::size_t j = 0; j < reference.n_columns(); ++j)
    columns.emplace_back(reference.column(j).name(), std::move(cells[j]));
  return Table(std::move(columns));
}

std::vector<std::pair<std::string, std::string>> rank_recode(
    const std::map<std::string, double>& input, const std::map<std::string, double>& reference) {
  auto from = by_rank(input);
  auto to = by_rank(reference);
  std::vector<std::pair<std::string, std::string>> mapping;
  for (std::size_t k = 0; k < std::min(from.size(), to.size()); ++k) {
    if (from[k] != to[k]) mapping.emplace_back(from[k], to[k]);
  }
  return mapping;
}

PairwisePatch infer_pairwise_patch(const Column& col_i, const Column& col_r, std::size_t ref_index,
                                   bool allow_transform, const Penalties& penalties) {
  PairwisePatch out;
  const bool num_i = col_i.kind() == ColumnKind::numeric;
  const bool num_r = col_r.kind() == ColumnKind::numeric;
  if (num_i != num_r) return out;
  if (num_i) {
    const auto& x = col_i.numeric_view();
    const auto& y = col_r.numeric_view();
    out.cost = ks_statistic(x, y);
    if (!allow_transform) return out;
    const double sd_i = population_stddev(x);
    if (sd_i <= 0.0) return out;
    const double a = population_stddev(y) / sd_i;
    const double b = mean(y) - a * mean(x);
    const double cost = ks_statistic(snapped(x, a, b), snapped(y)) + penalties.linear;
    if (cost < out.cost) out = {Linear{ref_index + 1, a, b}, cost};
    return out;
  }
  const auto& p = col_i.frequency_view();
  const auto& q = col_r.frequency_view();
  out.cost = (p.empty() && q.empty()) ? 0.0 : (p.empty() || q.empty()) ? 1.0 : tv_statistic(p, q);
  if (!allow_transform || col_i.kind() != ColumnKind::categorical ||
      col_r.kind() != ColumnKind::categorical)
    return out;
  auto mapping = rank_recode(p, q);
  if (mapping.empty()) return out;
  const double cost = tv_statistic(remap(p, mapping), q) + penalties.recode;
  if (cost < out.cost) out = {Recode{ref_index + 1, std::move(mapping)}, cost};
  return out;
}

BoundDatadiff::BoundDatadiff(Table input, Table reference, const Options& options)
    : input_(std::move(input)), reference_(std::move(reference)) {
  if (input_.n_columns() == 0 || reference_.n_columns() == 0)
    throw Error(ErrorCode::invalid_argument, "datadiff needs tables with at least one column");
  penalties_.linear = options.get_double("lambda_linear", penalties_.linear);
  penalties_.recode = options.get_double("lambda_recode", penalties_.recode);
  penalties_.insert = options.get_double("lambda_insert", penalties_.insert);
  penalties_.del = options.get_double("lambda_delete", penalties_.del);
  auto cap = options.get_int("sample_rows", 0);
  auto choices = options.get_int("max_choices", 25);
  if (cap < 0 || choices < 0)
    throw Error(ErrorCode::invalid_argument, "sample_rows and max_choices must be non-negative");
  max_choices_ = static_cast<std::size_t>(choices);
  input_sample_ = sample_rows(input_, static_cast<std::size_t>(cap), options.get_seed(0));
  reference_sample_ = sample_rows(reference_, static_cast<std::size_t>(cap), options.get_seed(0) + 1);
  cache_.resize(input_.n_columns() * reference_.n_columns());
}

const BoundDatadiff::PairCache& BoundDatadiff::pair(std::size_t i, std::size_t j) {
  auto& slot = cache_[i * reference_.n_columns() + j];
  if (!slot) {
    const auto& ci = input_sample_.column(i);
    const auto& cr = reference_sample_.column(j);
    slot = PairCache{infer_pairwise_patch(ci, cr, j, false, penalties_),
                     infer_pairwise_patch(ci, cr, j, true, penalties_)};
  }
  return *slot;
}

std::optional<std::size_t> BoundDatadiff::find_input(const std::string& token) const {
  if (auto i = input_.find(token)) return i;
  return parse_index(token, input_.n_columns());
}

std::optional<std::size_t> BoundDatadiff::find_reference(const std::string& token) const {
  if (auto j = reference_.find(token)) return j;
  return parse_index(token, reference_.n_columns());
}

std::size_t BoundDatadiff::resolve_input(const std::string& token) const {
  if (auto i = find_input(token)) return *i;
  throw Error(ErrorCode::parse_error, "no input column '" + token + "'");
}

std::size_t BoundDatadiff::resolve_reference(const std::string& token) const {
  if (auto j = find_reference(token)) return *j;
  throw Error(ErrorCode::parse_error, "no reference column '" + token + "'");
}

Constraint BoundDatadiff::canonical_constraint(std::string_view text) const {
  auto name = call_name(trim(text));
  auto body = trim(text);
  if (name == "notransform") {
    auto call = parse_call(body, 1);
    const auto& token = call.args[0];
    if (!input_.find(token) && !reference_.find(token) &&
        !parse_index(token, reference_.n_columns()))
      throw Error(ErrorCode::parse_error, "no column '" + token + "'");
    return print_call(call);
  }
  if (name == "match" || name == "nomatch") {
    auto call = parse_call(body, 2);
    if (!(find_input(call.args[0]) && find_reference(call.args[1]))) {
      if (find_input(call.args[1]) && find_reference(call.args[0]))
        std::swap(call.args[0], call.args[1]);
      else
        throw Error(ErrorCode::parse_error, "no column pair for '" + std::string(text) + "'");
    }
    return print_call(call);
  }
  throw Error(ErrorCode::parse_error, "not a datadiff constraint: '" + std::string(text) + "'");
}

Resolved BoundDatadiff::resolve(const InteractionSet& h) const {
  Resolved r;
  for (const auto& raw : h.constraints()) {
    auto call = parse_call(canonical_constraint(raw), call_name(raw) == "notransform" ? 1 : 2);
    if (call.name == "notransform") {
      const auto& token = call.args[0];
      if (auto i = input_.find(token))
        r.frozen_inputs.insert(*i);
      else
        r.frozen_references.insert(resolve_reference(token));
      continue;
    }
    auto key = std::make_pair(resolve_input(call.args[0]), resolve_reference(call.args[1]));
    (call.name == "match" ? r.match : r.nomatch).insert(key);
  }
  for (const auto& m : r.match) {
    if (r.nomatch.count(m))
      throw Error(ErrorCode::conflicting_constraints, "a column pair is both matched and unmatched");
    for (const auto& other : r.match) {
      if (other != m && (other.first == m.first || other.second == m.second))
        throw Error(ErrorCode::conflicting_constraints, "a column is matched twice");
    }
  }
  return r;
}

CostMatrix BoundDatadiff::cost_matrix(const InteractionSet& h) {
  const Resolved r = resolve(h);
  CostMatrix m;
  m.n_input = input_.n_columns();
  m.n_reference = reference_.n_columns();
  const std::size_t ni = m.n_input, nr = m.n_reference, n = ni + nr;
  m.cost.assign(n, std::vector<double>(n, 0.0));
  m.patch_for.assign(ni, std::vector<std::optional<Patch>>(nr));
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nr; ++j) {
      const auto& cached = pair(i, j);
      const auto& chosen = r.frozen(i, j) ? cached.raw : cached.transformed;
      m.cost[i][j] = chosen.cost;
      m.patch_for[i][j] = chosen.transform;
    }
    for (std::size_t k = nr; k < n; ++k) m.cost[i][k] = penalties_.del;
  }
  for (std::size_t k = ni; k < n; ++k)
    for (std::size_t j = 0; j < nr; ++j) m.cost[k][j] = penalties_.insert;
  for (auto [i, j] : r.nomatch) m.cost[i][j] = kInfinity;
  for (auto [i, j] : r.match) {
    for (std::size_t k = 0; k < n; ++k) {
      m.cost[i][k] = kInfinity;
      m.cost[k][j] = kInfinity;
    }
    m.cost[i][j] = 0.0;
  }
  return m;
}

PatchSet BoundDatadiff::best_patches(const InteractionSet& h) {
  const CostMatrix m = cost_matrix(h);
  CostGrid biased = m.cost;
  // Equal-cost matchings resolve toward keeping columns in place.
  for (std::size_t i = 0; i < m.n_input; ++i)
    for (std::size_t j = 0; j < m.n_reference; ++j)
      if (i != j && std::isfinite(biased[i][j])) biased[i][j] += 1e-9;
  const Assignment a = solve_assignment(biased);

  PatchSet out;
  Permute permute;
  std::vector<Patch> transforms;
  std::vector<Patch> inserts;
  for (std::size_t i = 0; i < m.n_input; ++i) {
    const std::size_t j = a.row_to_col[i];
    if (j >= m.n_reference) {
      out.patches.push_back(Delete{i + 1});
      continue;
    }
    permute.pairs.emplace_back(i + 1, j + 1);
    if (m.patch_for[i][j]) transforms.push_back(*m.patch_for[i][j]);
  }
  for (std::size_t k = m.n_input; k < m.cost.size(); ++k) {
    const std::size_t j = a.row_to_col[k];
    if (j < m.n_reference) inserts.push_back(Insert{j + 1});
  }
  std::sort(inserts.begin(), inserts.end(), [](const Patch& x, const Patch& y) {
    return std::get<Insert>(x).column < std::get<Insert>(y).column;
  });
  out.patches.push_back(std::move(permute));
  out.patches.insert(out.patches.end(), transforms.begin(), transforms.end());
  out.patches.insert(out.patches.end(), inserts.begin(), inserts.end());
  return out;
}

Expression BoundDatadiff::best(const InteractionSet& h) {
  const CostMatrix m = cost_matrix(h);
  PatchSet patches = best_patches(h);
  double total = 0.0;
  for (auto [i, j] : patches.permute().pairs) total += m.cost[i - 1][j - 1];
  total += penalties_.del * static_cast<double>(patches.deletes().size());
  total += penalties_.insert * static_cast<double>(patches.inserts().size());
  Expression e;
  e.script = patches.script();
  e.score = -total;
  e.payload = std::move(patches);
  return e;
}

const PatchSet& BoundDatadiff::patches(const Expression& expression) {
  const auto* p = std::any_cast<PatchSet>(&expression.payload);
  if (!p) throw Error(ErrorCode::invalid_argument, "expression is not a datadiff patch set");
  return *p;
}

std::vector<Choice> BoundDatadiff::choices(const InteractionSet& h) {
  const CostMatrix m = cost_matrix(h);
  const Resolved r = resolve(h);
  const PatchSet e = best_patches(h);
  const auto& pairs = e.permute().pairs;
  std::vector<Choice> out;
  auto offer = [&](Constraint c, std::string label) {
    if (out.size() >= max_choices_ || h.contains(c)) return;
    out.push_back(extend(h, std::move(c), std::move(label)));
  };

  const auto transformed = e.transformed();
  for (auto [i, j] : pairs) {
    if (std::find(transformed.begin(), transformed.end(), j) == transformed.end()) continue;
    const auto& name = input_.column(i - 1).name();
    offer(print_call({"notransform", {name}}), "Don't transform " + quoted(name));
  }

  std::vector<std::pair<std::size_t, std::size_t>> matched;
  for (auto [i, j] : pairs)
    if (!r.match.count({i - 1, j - 1})) matched.emplace_back(i - 1, j - 1);
  std::stable_sort(matched.begin(), matched.end(),
                   [&](auto x, auto y) { return m.cost[x.first][x.second] > m.cost[y.first][y.second]; });
  for (auto [i, j] : matched) {
    const auto& in = input_.column(i).name();
    const auto& ref = reference_.column(j).name();
    offer(print_call({"nomatch", {in, ref}}), "Don't match " + quoted(in) + " and " + quoted(ref));
  }

  std::vector<std::pair<std::size_t, std::size_t>> unmatched;
  for (std::size_t i = 0; i < m.n_input; ++i) {
    for (std::size_t j = 0; j < m.n_reference; ++j) {
      if (std::find(pairs.begin(), pairs.end(), std::make_pair(i + 1, j + 1)) != pairs.end()) continue;
      if (!std::isfinite(m.cost[i][j])) continue;
      unmatched.emplace_back(i, j);
    }
  }
  std::stable_sort(unmatched.begin(), unmatched.end(),
                   [&](auto x, auto y) { return m.cost[x.first][x.second] < m.cost[y.first][y.second]; });
  for (auto [i, j] : unmatched) {
    const auto& in = input_.column(i).name();
    const auto& ref = reference_.column(j).name();
    offer(print_call({"match", {in, ref}}), "Match " + quoted(in) + " and " + quoted(ref));
  }
  return out;
}

Table BoundDatadiff::apply(const Expression& expression) const {
  return apply_patches(patches(expression), input_, reference_);
}

bool BoundDatadiff::valid(const Expression& expression, const InteractionSet& h) const {
  Resolved r;
  try {
    r = resolve(h);
  } catch (const Error&) {
    return false;
  }
  const PatchSet& e = patches(expression);
  std::set<std::pair<std::size_t, std::size_t>> pi;
  std::map<std::size_t, std::size_t> source;
  for (auto [i, j] : e.permute().pairs) {
    pi.emplace(i - 1, j - 1);
    source[j - 1] = i - 1;
  }
  for (const auto& m : r.match)
    if (!pi.count(m)) return false;
  for (const auto& m : r.nomatch)
    if (pi.count(m)) return false;
  for (auto j : e.transformed()) {
    auto it = source.find(j - 1);
    if (it == source.end() || r.frozen(it->second, j - 1)) return false;
  }
  return true;
}

const AssistantDescriptor& DatadiffAssistant::descriptor() const {
  static const AssistantDescriptor d{"datadiff", "Datadiff", {"input", "reference"}, "datadiff"};
  return d;
}

std::unique_ptr<BoundAssistant> DatadiffAssistant::bind(const Bindings& bindings,
                                                        const Options& options) const {
  check_bindings(descriptor(), bindings);
  return std::make_unique<BoundDatadiff>(read_csv(bindings.at("input")),
                                         read_csv(bindings.at("reference")), options);
}

}  // namespace wrangle::datadiff
