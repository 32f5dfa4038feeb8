#include "wrangle/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "wrangle/dialect.hpp"
#include "wrangle/encoding.hpp"
#include "wrangle/error.hpp"

namespace wrangle::eval {

namespace {

using Rng = std::mt19937_64;

std::string one_decimal(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1) << v;
  return out.str();
}

std::string weighted(Rng& rng, const std::vector<std::pair<std::string, double>>& levels) {
  std::vector<double> w;
  for (const auto& l : levels) w.push_back(l.second);
  std::discrete_distribution<std::size_t> d(w.begin(), w.end());
  return levels[d(rng)].first;
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t below(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

Table select_rows(const Table& t, const std::vector<std::size_t>& rows) {
  std::vector<Column> columns;
  for (const auto& c : t.columns()) {
    std::vector<std::string> cells;
    for (auto r : rows) cells.push_back(c.cells()[r]);
    columns.emplace_back(c.name(), std::move(cells));
  }
  return Table(std::move(columns));
}

// One column of the corrupted half while it is being built.
struct Slot {
  std::vector<std::string> cells;
  std::optional<std::size_t> source;  // reference column
  bool touched = false;
};

}  // namespace

Table iris_like(std::size_t rows, std::uint64_t seed) {
  struct Species {
    const char* name;
    double mean[4];
    double sd[4];
  };
  static const Species kSpecies[] = {
      {"setosa", {5.01, 3.43, 1.46, 0.25}, {0.35, 0.38, 0.17, 0.11}},
      {"versicolor", {5.94, 2.77, 4.26, 1.33}, {0.52, 0.31, 0.47, 0.20}},
      {"virginica", {6.59, 2.97, 5.55, 2.03}, {0.64, 0.32, 0.55, 0.27}},
  };
  static const char* kNames[] = {"sepal_length", "sepal_width", "petal_length", "petal_width"};
  Rng rng(seed);
  std::vector<std::vector<std::string>> cells(5);
  for (std::size_t r = 0; r < rows; ++r) {
    const Species& s = kSpecies[r % 3];
    for (int k = 0; k < 4; ++k) {
      std::normal_distribution<double> n(s.mean[k], s.sd[k]);
      cells[k].push_back(one_decimal(std::max(0.1, n(rng))));
    }
    cells[4].push_back(s.name);
  }
  std::vector<Column> columns;
  for (int k = 0; k < 4; ++k) columns.emplace_back(kNames[k], std::move(cells[k]));
  columns.emplace_back("species", std::move(cells[4]));
  return Table(std::move(columns));
}

Table adult_like(std::size_t rows, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::pair<std::string, double>> workclass = {
      {"Private", 70}, {"Self-emp-not-inc", 8}, {"Local-gov", 6}, {"State-gov", 4},
      {"Federal-gov", 3}, {"Self-emp-inc", 3}, {"?", 6}};
  const std::vector<std::string> education = {
      "Preschool", "1st-4th", "5th-6th", "7th-8th", "9th", "10th", "11th", "12th",
      "HS-grad", "Some-college", "Assoc-voc", "Assoc-acdm", "Bachelors", "Masters", "Prof-school", "Doctorate"};
  const std::vector<double> education_w = {0.2, 0.5, 1, 2, 1.6, 2.9, 3.6, 1.3, 32, 22, 4.2, 3.3, 16.4, 5.3, 1.8, 1.3};
  const std::vector<std::pair<std::string, double>> marital = {
      {"Married-civ-spouse", 46}, {"Never-married", 33}, {"Divorced", 14}, {"Separated", 3},
      {"Widowed", 3}, {"Married-spouse-absent", 1}, {"Married-AF-spouse", 0.1}};
  const std::vector<std::pair<std::string, double>> occupation = {
      {"Prof-specialty", 13}, {"Craft-repair", 13}, {"Exec-managerial", 12}, {"Adm-clerical", 12},
      {"Sales", 11}, {"Other-service", 10}, {"Machine-op-inspct", 6}, {"Transport-moving", 5},
      {"Handlers-cleaners", 4}, {"Farming-fishing", 3}, {"Tech-support", 3}, {"Protective-serv", 2},
      {"Priv-house-serv", 0.5}, {"Armed-Forces", 0.1}};
  const std::vector<std::pair<std::string, double>> relationship = {
      {"Husband", 40}, {"Not-in-family", 26}, {"Own-child", 16}, {"Unmarried", 11}, {"Wife", 5}, {"Other-relative", 3}};
  const std::vector<std::pair<std::string, double>> race = {
      {"White", 85}, {"Black", 10}, {"Asian-Pac-Islander", 3}, {"Amer-Indian-Eskimo", 1}, {"Other", 1}};
  const std::vector<std::pair<std::string, double>> sex = {{"Male", 67}, {"Female", 33}};
  const std::vector<std::pair<std::string, double>> country = {
      {"United-States", 90}, {"Mexico", 2}, {"Philippines", 1}, {"Germany", 1}, {"Canada", 1}, {"India", 1}, {"?", 2}};

  std::vector<std::vector<std::string>> c(12);
  std::gamma_distribution<double> age_extra(2.0, 10.5);
  std::lognormal_distribution<double> fnlwgt(12.0, 0.5);
  std::exponential_distribution<double> gain(1.0 / 7000.0);
  std::normal_distribution<double> hours(40.0, 12.0);
  for (std::size_t r = 0; r < rows; ++r) {
    c[0].push_back(std::to_string(std::min(90, 17 + static_cast<int>(age_extra(rng)))));
    c[1].push_back(weighted(rng, workclass));
    c[2].push_back(std::to_string(static_cast<long>(fnlwgt(rng))));
    const std::size_t edu = std::discrete_distribution<std::size_t>(education_w.begin(), education_w.end())(rng);
    c[3].push_back(education[edu]);
    c[4].push_back(std::to_string(edu + 1));
    c[5].push_back(weighted(rng, marital));
    c[6].push_back(weighted(rng, occupation));
    c[7].push_back(weighted(rng, relationship));
    c[8].push_back(weighted(rng, race));
    c[9].push_back(weighted(rng, sex));
    c[10].push_back(uniform(rng, 0, 1) < 0.08 ? std::to_string(static_cast<long>(gain(rng))) : "0");
    c[11].push_back(std::to_string(std::clamp(static_cast<int>(std::lround(hours(rng))), 1, 99)));
  }
  // native_country replaces nothing; it is drawn last to keep earlier columns stable.
  std::vector<std::string> native;
  for (std::size_t r = 0; r < rows; ++r) native.push_back(weighted(rng, country));
  const char* names[] = {"age", "workclass", "fnlwgt", "education", "education_num", "marital_status",
                         "occupation", "relationship", "race", "sex", "capital_gain", "hours_per_week"};
  std::vector<Column> columns;
  for (int k = 0; k < 12; ++k) columns.emplace_back(names[k], std::move(c[k]));
  columns.emplace_back("native_country", std::move(native));
  return Table(std::move(columns));
}

std::string_view to_string(CorruptionKind kind) {
  switch (kind) {
    case CorruptionKind::insert_numeric: return "insert_numeric";
    case CorruptionKind::insert_categorical: return "insert_categorical";
    case CorruptionKind::delete_column: return "delete_column";
    case CorruptionKind::recode: return "recode";
    case CorruptionKind::linear: return "linear";
  }
  return "unknown";
}

CorruptionCase corrupt(const Table& table, std::uint64_t seed, CorruptionMode mode) {
  if (table.n_columns() < 4 || table.n_rows() < 40)
    throw Error(ErrorCode::invalid_argument, "corruption needs at least 4 columns and 40 rows");
  Rng rng(seed);
  CorruptionCase out;
  out.seed = seed;

  std::vector<std::size_t> rows(table.n_rows());
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
  std::shuffle(rows.begin(), rows.end(), rng);
  const std::size_t half = rows.size() / 2;
  std::vector<std::size_t> first(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(half));
  std::vector<std::size_t> second(rows.begin() + static_cast<std::ptrdiff_t>(half), rows.end());
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  out.original = select_rows(table, first);
  out.clean = select_rows(table, second);

  std::vector<Slot> slots;
  for (std::size_t j = 0; j < out.original.n_columns(); ++j)
    slots.push_back({out.original.column(j).cells(), j, false});

  std::vector<CorruptionKind> kinds = {CorruptionKind::insert_numeric, CorruptionKind::insert_categorical,
                                       CorruptionKind::delete_column};
  if (mode == CorruptionMode::all) {
    kinds.push_back(CorruptionKind::recode);
    kinds.push_back(CorruptionKind::linear);
  }

  std::map<std::size_t, datadiff::Recode> recodes;   // by reference column
  std::map<std::size_t, datadiff::Linear> linears;
  std::vector<std::size_t> deleted_refs;
  const std::size_t n_rows = out.original.n_rows();

  auto candidates = [&](auto predicate) {
    std::vector<std::size_t> idx;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (slots[s].source && !slots[s].touched && predicate(out.original.column(*slots[s].source))) idx.push_back(s);
    return idx;
  };

  while (out.applied.size() < 2) {
    const auto kind = kinds[below(rng, kinds.size())];
    switch (kind) {
      case CorruptionKind::insert_numeric: {
        Slot s;
        for (std::size_t r = 0; r < n_rows; ++r) s.cells.push_back(format_real(uniform(rng, 0.0, 1.0)));
        s.touched = true;
        slots.push_back(std::move(s));
        break;
      }
      case CorruptionKind::insert_categorical: {
        Slot s;
        for (std::size_t r = 0; r < n_rows; ++r) s.cells.push_back(uniform(rng, 0, 1) < 0.5 ? "flag_a" : "flag_b");
        s.touched = true;
        slots.push_back(std::move(s));
        break;
      }
      case CorruptionKind::delete_column: {
        auto idx = candidates([](const Column&) { return true; });
        if (idx.size() < 2) continue;
        const auto s = idx[below(rng, idx.size())];
        deleted_refs.push_back(*slots[s].source);
        slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(s));
        break;
      }
      case CorruptionKind::recode: {
        auto idx = candidates([](const Column& c) { return c.kind() == ColumnKind::categorical; });
        if (idx.empty()) continue;
        auto& s = slots[idx[below(rng, idx.size())]];
        std::map<std::string, std::string> rename;
        for (const auto& [level, freq] : out.original.column(*s.source).frequency_view())
          rename[level] = "r" + std::to_string(below(rng, 1000000)) + "_" + std::to_string(rename.size());
        datadiff::Recode inverse{*s.source + 1, {}};
        for (const auto& [from, to] : rename) inverse.mapping.emplace_back(to, from);
        for (auto& cell : s.cells)
          if (auto it = rename.find(cell); it != rename.end()) cell = it->second;
        recodes[*s.source] = std::move(inverse);
        s.touched = true;
        break;
      }
      case CorruptionKind::linear: {
        auto idx = candidates([](const Column& c) { return c.kind() == ColumnKind::numeric; });
        if (idx.empty()) continue;
        auto& s = slots[idx[below(rng, idx.size())]];
        const double vbar = mean(out.original.column(*s.source).numeric_view());
        double a = 0.0;
        while (a == 0.0) a = uniform(rng, -0.5, 0.5);
        const double b = uniform(rng, -2.0 * std::abs(vbar), 2.0 * std::abs(vbar));
        for (auto& cell : s.cells) {
          if (is_missing(cell)) continue;
          if (auto v = parse_real(cell)) cell = format_real(a * *v + b);
        }
        linears[*s.source] = datadiff::Linear{*s.source + 1, 1.0 / a, -b / a};
        out.linear_params.emplace_back(a, b);
        s.touched = true;
        break;
      }
    }
    out.applied.push_back(kind);
  }

  // Reordering is always applied and never the identity.
  std::vector<std::size_t> order(slots.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  const auto identity = order;
  while (order == identity) std::shuffle(order.begin(), order.end(), rng);

  std::vector<Column> columns;
  std::set<std::string> ref_names;
  for (const auto& c : out.clean.columns()) ref_names.insert(c.name());
  out.source.assign(out.clean.n_columns(), std::nullopt);
  datadiff::Permute permute;
  std::vector<datadiff::Patch> deletes;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const Slot& s = slots[order[pos]];
    std::string name = "in_" + std::to_string(pos + 1);
    while (ref_names.count(name)) name += "_";
    columns.emplace_back(name, s.cells);
    if (s.source) {
      out.source[*s.source] = pos;
      permute.pairs.emplace_back(pos + 1, *s.source + 1);
    } else {
      deletes.push_back(datadiff::Delete{pos + 1});
    }
  }
  out.corrupted = Table(std::move(columns));

  std::sort(permute.pairs.begin(), permute.pairs.end());
  out.truth.patches = deletes;
  out.truth.patches.push_back(permute);
  for (std::size_t j = 0; j < out.clean.n_columns(); ++j) {
    if (auto r = recodes.find(j); r != recodes.end()) out.truth.patches.push_back(r->second);
    if (auto l = linears.find(j); l != linears.end()) out.truth.patches.push_back(l->second);
  }
  std::sort(deleted_refs.begin(), deleted_refs.end());
  for (auto j : deleted_refs) out.truth.patches.push_back(datadiff::Insert{j + 1});
  return out;
}

Trace drive_datadiff(const CorruptionCase& c, std::size_t case_id, const Options& options, std::size_t cap) {
  Trace trace{"datadiff", case_id, std::nullopt, {}};
  datadiff::BoundDatadiff bound(c.corrupted, c.clean, options);
  InteractionSet h;
  const std::size_t n_ref = c.clean.n_columns();
  for (std::size_t k = 0;; ++k) {
    const auto patches = bound.best_patches(h);
    std::vector<std::optional<std::size_t>> got(n_ref);
    for (auto [i, j] : patches.permute().pairs) got[j - 1] = i - 1;
    if (got == c.source) {
      trace.interactions = k;
      return trace;
    }
    if (k == cap) return trace;

    // A discrepancy is contradicted by pinning the misplaced input to its
    // true column, by forbidding a transform the truth does not have, by
    // forbidding the wrong pair, or by pinning this column's true input.
    const auto transformed = patches.transformed();
    const auto truly_transformed = c.truth.transformed();
    auto has = [](const std::vector<std::size_t>& v, std::size_t x) {
      return std::find(v.begin(), v.end(), x) != v.end();
    };
    std::vector<Constraint> wanted;
    for (std::size_t j = 0; j < n_ref; ++j) {
      if (got[j] == c.source[j]) continue;
      const auto& ref = c.clean.column(j).name();
      if (got[j]) {
        const auto& in = c.corrupted.column(*got[j]).name();
        auto home = std::find(c.source.begin(), c.source.end(), got[j]);
        const bool homeless = home == c.source.end();
        const auto home_j = static_cast<std::size_t>(home - c.source.begin());
        if (!homeless) wanted.push_back(print_call({"match", {in, c.clean.column(home_j).name()}}));
        if (has(transformed, j + 1) && (homeless || !has(truly_transformed, home_j + 1)))
          wanted.push_back(print_call({"notransform", {in}}));
        wanted.push_back(print_call({"nomatch", {in, ref}}));
      }
      if (c.source[j]) wanted.push_back(print_call({"match", {c.corrupted.column(*c.source[j]).name(), ref}}));
    }
    const auto choices = bound.choices(h);
    const Choice* next = nullptr;
    for (const auto& w : wanted) {
      for (const auto& ch : choices)
        if (ch.next.constraints().back() == w) {
          next = &ch;
          break;
        }
      if (next) break;
    }
    if (!next) return trace;
    trace.chosen.push_back(next->next.constraints().back());
    h = next->next;
  }
}

Trace drive_dialect(const std::string& text, const Dialect& target, std::size_t case_id,
                    const Options& options, std::size_t cap) {
  Trace trace{"csv-dialect", case_id, std::nullopt, {}};
  dialect::BoundDialect bound(text, options);
  InteractionSet h;
  for (std::size_t k = 0;; ++k) {
    const Dialect got = dialect::BoundDialect::dialect_of(bound.best(h));
    if (got == target) {
      trace.interactions = k;
      return trace;
    }
    if (k == cap) return trace;
    Constraint wanted;
    if (got.delimiter != target.delimiter)
      wanted = "fix_delimiter(" + spell_char(target.delimiter) + ")";
    else if (got.quote != target.quote)
      wanted = "fix_quote(" + spell_char(target.quote) + ")";
    else
      wanted = "fix_escape(" + spell_char(target.escape) + ")";
    wanted = bound.canonical_constraint(wanted);
    const auto choices = bound.choices(h);
    const Choice* next = nullptr;
    for (const auto& ch : choices)
      if (ch.next.constraints().back() == wanted) next = &ch;
    if (!next) return trace;
    trace.chosen.push_back(wanted);
    h = next->next;
  }
}

Trace drive_ptype(const Table& table, std::size_t column, ptype::PrimitiveType target, std::size_t case_id,
                  const Options& options, std::size_t cap) {
  Trace trace{"ptype", case_id, std::nullopt, {}};
  ptype::BoundTypeInfer bound(table, column, options);
  InteractionSet h;
  for (std::size_t k = 0;; ++k) {
    ptype::PrimitiveType got;
    try {
      got = ptype::BoundTypeInfer::expression_of(bound.best(h)).type;
    } catch (const Error&) {
      return trace;
    }
    if (got == target) {
      trace.interactions = k;
      return trace;
    }
    if (k == cap) return trace;
    const Constraint wanted = bound.canonical_constraint("not_type(" + std::string(ptype::to_string(got)) + ")");
    const auto choices = bound.choices(h);
    const Choice* next = nullptr;
    for (const auto& ch : choices)
      if (ch.next.constraints().back() == wanted) next = &ch;
    if (!next) return trace;
    trace.chosen.push_back(wanted);
    h = next->next;
  }
}

DialectFixture dialect_fixture(std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<char> delimiters = {',', ';', '\t', '|', ':'};
  DialectFixture f;
  f.target.delimiter = delimiters[below(rng, delimiters.size())];
  f.target.quote = below(rng, 2) == 0 ? '"' : '\'';
  f.target.escape = below(rng, 3) == 0 ? std::optional<char>('\\') : std::nullopt;
  const char d = *f.target.delimiter;
  const char q = *f.target.quote;

  const std::vector<std::string> words = {"alpha", "beta", "gamma", "delta", "omega", "sigma", "kappa"};
  const std::size_t n_cols = 3 + below(rng, 4);
  const std::size_t n_rows = 10 + below(rng, 21);
  auto field = [&](std::string cell, bool quoted) {
    if (!quoted) return cell;
    std::string out(1, q);
    for (char c : cell) {
      if (c == q) out += f.target.escape ? '\\' : q;
      out += c;
    }
    return out + q;
  };
  std::string text;
  for (std::size_t c = 0; c < n_cols; ++c) {
    if (c > 0) text += d;
    text += "col" + std::to_string(c + 1);
  }
  text += '\n';
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (c > 0) text += d;
      switch ((c + r) % 3) {
        case 0: text += std::to_string(below(rng, 1000)); break;
        case 1: text += format_real(static_cast<double>(below(rng, 10000)) / 100.0); break;
        default: {
          // Text cells carry the delimiter often enough that quoting (or
          // escaping) is needed to read the file right.
          std::string w = words[below(rng, words.size())];
          const auto roll = below(rng, 3);
          if (roll == 0) {
            text += field(w + std::string(1, d) + " " + words[below(rng, words.size())], true);
          } else if (roll == 1 && f.target.escape) {
            text += w + "\\" + std::string(1, d) + "x";
          } else {
            text += w;
          }
        }
      }
    }
    text += '\n';
  }
  // Guarantee the quote and escape characters occur.
  text += std::to_string(below(rng, 1000));
  for (std::size_t c = 1; c < n_cols; ++c) {
    text += d;
    if (c == 1) text += field("x" + std::string(1, d) + "y", true);
    else if (c == 2 && f.target.escape) text += "p\\" + std::string(1, d) + "q";
    else text += "z";
  }
  text += '\n';
  f.text = std::move(text);
  return f;
}

TypeFixture type_fixture(std::uint64_t seed) {
  Rng rng(seed);
  const auto target = ptype::kAllTypes[below(rng, ptype::kAllTypes.size())];
  const std::vector<std::string> words = {"red", "green", "blue", "teal", "amber", "ivory", "olive", "plum"};
  std::vector<std::string> cells;
  const std::size_t n = 30 + below(rng, 60);
  for (std::size_t r = 0; r < n; ++r) {
    switch (target) {
      case ptype::PrimitiveType::boolean: cells.push_back(below(rng, 2) ? "true" : "false"); break;
      case ptype::PrimitiveType::integer: cells.push_back(std::to_string(below(rng, 5000))); break;
      case ptype::PrimitiveType::floating:
        cells.push_back(format_real(static_cast<double>(below(rng, 100000)) / 100.0 + 0.01));
        break;
      case ptype::PrimitiveType::date: {
        std::ostringstream d;
        d << 1990 + below(rng, 30) << '-' << std::setw(2) << std::setfill('0') << 1 + below(rng, 12) << '-'
          << std::setw(2) << std::setfill('0') << 1 + below(rng, 28);
        cells.push_back(d.str());
        break;
      }
      case ptype::PrimitiveType::string: cells.push_back(words[below(rng, words.size())] + "_" + words[below(rng, words.size())]); break;
    }
  }
  cells[below(rng, cells.size())] = "NA";
  return {Table({Column("value", cells)}), target};
}

Report report(const std::vector<Trace>& traces) {
  if (traces.empty()) throw Error(ErrorCode::invalid_argument, "no traces to report");
  Report r;
  r.assistant = traces.front().assistant;
  r.cases = traces.size();
  std::size_t needing = 0;
  double total = 0.0;
  for (const auto& t : traces) {
    if (!t.interactions) {
      r.dnf += 1.0;
      continue;
    }
    r.fractions[std::min<std::size_t>(*t.interactions, 4)] += 1.0;
    if (*t.interactions > 0) {
      ++needing;
      total += static_cast<double>(*t.interactions);
    }
  }
  for (auto& f : r.fractions) f /= static_cast<double>(r.cases);
  r.dnf /= static_cast<double>(r.cases);
  if (needing > 0) r.average = total / static_cast<double>(needing);
  return r;
}

namespace {

std::string fixed2(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << v;
  return out.str();
}

// The conditional average is undefined when no case needed interaction.
constexpr const char* kUndefined = "—";

}  // namespace

std::string Report::to_csv() const {
  std::string out = "assistant,cases,0,1,2,3,4+,dnf,average\n";
  out += assistant + "," + std::to_string(cases);
  for (double f : fractions) out += "," + fixed2(f);
  out += "," + fixed2(dnf) + "," + (average ? fixed2(*average) : std::string(kUndefined)) + "\n";
  return out;
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << std::left << std::setw(12) << "assistant" << std::right << std::setw(7) << "cases";
  for (const char* h : {"0", "1", "2", "3", "4+", "dnf", "average"}) out << std::setw(8) << h;
  out << '\n' << std::left << std::setw(12) << assistant << std::right << std::setw(7) << cases;
  for (double f : fractions) out << std::setw(8) << fixed2(f);
  out << std::setw(8) << fixed2(dnf) << std::setw(average ? 8 : 10) << (average ? fixed2(*average) : kUndefined) << '\n';
  return out.str();
}

std::vector<Trace> run_eval(const EvalConfig& config) {
  if (config.cases == 0) throw Error(ErrorCode::invalid_argument, "no cases requested");
  const std::string& a = config.assistant;
  if (a != "datadiff" && a != "csv-dialect" && a != "ptype")
    throw Error(ErrorCode::unknown_assistant, "no evaluation for assistant '" + a + "'");

  auto run_case = [&](std::size_t k) -> Trace {
    const std::uint64_t seed = config.seed * 1000003ULL + k;
    if (a == "datadiff") {
      const Table base = k % 2 == 0 ? iris_like(150, seed) : adult_like(300, seed);
      return drive_datadiff(corrupt(base, seed, config.mode), k, config.options, config.cap);
    }
    if (a == "csv-dialect") {
      auto f = dialect_fixture(seed);
      return drive_dialect(f.text, f.target, k, config.options, config.cap);
    }
    auto f = type_fixture(seed);
    return drive_ptype(f.table, 0, f.target, k, config.options, config.cap);
  };

  std::vector<Trace> traces(config.cases);
  std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, config.cases);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t k; (k = next++) < config.cases;) traces[k] = run_case(k);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return traces;
}

}  // namespace wrangle::eval
