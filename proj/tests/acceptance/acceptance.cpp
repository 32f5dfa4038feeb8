// Runs the release checklist end to end and prints one PASS/FAIL line per
// criterion. Exit status is non-zero when any criterion fails.

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "fixtures.hpp"
#include "http_api.hpp"
#include "oracles.hpp"
#include "pfsm_oracle.hpp"
#include "stub_assistant.hpp"
#include "wrangle/assignment.hpp"
#include "wrangle/csv.hpp"
#include "wrangle/datadiff.hpp"
#include "wrangle/dialect.hpp"
#include "wrangle/encoding.hpp"
#include "wrangle/error.hpp"
#include "wrangle/eval.hpp"
#include "wrangle/outlier.hpp"
#include "wrangle/registry.hpp"
#include "wrangle/semantic.hpp"
#include "wrangle/service.hpp"
#include "wrangle/typeinfer.hpp"
#include "wrangle/wire.hpp"

namespace {

using namespace wrangle;
using testing::fixture;
namespace fs = std::filesystem;
using nlohmann::json;

// Collects the first few failed expectations of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string summary() const {
    std::string out = std::to_string(count_) + " failed: ";
    for (std::size_t i = 0; i < failures_.size(); ++i) out += (i ? "; " : "") + failures_[i];
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
};

template <typename T>
std::string str(const T& value) {
  std::ostringstream s;
  s << value;
  return s.str();
}

std::string joined(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

// ---------------------------------------------------------------- 1

void toy_merge(Check& c) {
  datadiff::BoundDatadiff d(read_csv(fixture("toy_input.csv")), read_csv(fixture("toy_reference.csv")), {});
  const auto h0 = d.best({});
  c.expect(h0.script == std::vector<std::string>{"delete(3)", "permute((1,2),(2,1))",
                                                 "recode(2,[Cardiff->London])"},
           "H0 script was " + joined(h0.script));
  const auto h1 = d.best(InteractionSet({"notransform(2)"}));
  c.expect(h1.script == std::vector<std::string>{"delete(3)", "permute((1,2),(2,1))"},
           "notransform script was " + joined(h1.script));
}

// ---------------------------------------------------------------- 2

// Padded layout as datadiff builds it: input rows then insert rows,
// reference columns then delete columns. Costs are multiples of 1/16 so
// every sum is exact.
CostGrid padded_matrix(std::size_t n, std::mt19937_64& rng) {
  const std::size_t n_input = 1 + rng() % (n - 1), n_ref = n - n_input;
  std::uniform_int_distribution<int> tick(0, 32);
  std::bernoulli_distribution forbid(0.2);
  CostGrid cost(n, std::vector<double>(n, kInfinity));
  for (std::size_t i = 0; i < n_input; ++i) {
    for (std::size_t j = 0; j < n_ref; ++j) cost[i][j] = forbid(rng) ? kInfinity : tick(rng) / 16.0;
    cost[i][n_ref + i] = tick(rng) / 16.0;
  }
  for (std::size_t k = 0; k < n_ref; ++k) {
    cost[n_input + k][k] = tick(rng) / 16.0;
    for (std::size_t j = n_ref; j < n; ++j) cost[n_input + k][j] = 0.0;
  }
  return cost;
}

void assignment_oracle(Check& c) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = trial % 2 ? 7 : 5;
    const auto cost = padded_matrix(n, rng);
    const double oracle = testing::brute_force_assignment(cost);
    const auto got = solve_assignment(cost);
    c.expect(got.cost == oracle, "trial " + str(trial) + ": " + str(got.cost) + " vs " + str(oracle));
    double sum = 0;
    for (std::size_t r = 0; r < n; ++r) sum += cost[r][got.row_to_col[r]];
    c.expect(sum == got.cost, "trial " + str(trial) + " reported cost disagrees with its assignment");
  }
}

// ---------------------------------------------------------------- 3

std::map<std::string, double> count_frequencies(const std::vector<std::string>& cells) {
  std::map<std::string, double> out;
  for (const auto& cell : cells) out[cell] += 1.0;
  for (auto& [k, v] : out) v /= static_cast<double>(cells.size());
  return out;
}

void distance_oracles(Check& c) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 40), label(0, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(size(rng)), b(size(rng));
    for (auto& v : a) v = std::round(normal(rng) * 4) / 2;
    for (auto& v : b) v = normal(rng) + 0.3;
    const double ks = datadiff::ks_statistic(a, b);
    c.expect(std::abs(ks - testing::ks_direct(a, b)) <= 1e-12, "KS trial " + str(trial));

    std::vector<std::string> p(size(rng)), q(size(rng));
    for (auto& v : p) v = "c" + str(label(rng));
    for (auto& v : q) v = "c" + str(label(rng) / 2);
    const double tv = datadiff::tv_statistic(category_frequencies(p), category_frequencies(q));
    c.expect(std::abs(tv - testing::tv_direct(count_frequencies(p), count_frequencies(q))) <= 1e-12,
             "TV trial " + str(trial));
  }
}

// ---------------------------------------------------------------- 4

void reconciliation(Check& c) {
  eval::EvalConfig config;
  config.mode = eval::CorruptionMode::structural;
  const auto structural = eval::run_eval(config);
  std::size_t zero = 0, within4 = 0;
  for (const auto& t : structural) {
    zero += t.interactions == std::size_t{0};
    within4 += t.interactions && *t.interactions <= 4;
  }
  c.expect(zero >= 50, "structural: " + str(zero) + "/100 at zero interactions");
  c.expect(within4 >= 90, "structural: " + str(within4) + "/100 within 4 interactions");

  config.mode = eval::CorruptionMode::all;
  std::size_t solved = 0;
  for (const auto& t : eval::run_eval(config)) solved += t.interactions.has_value();
  c.expect(solved >= 80, "with transforms: " + str(solved) + "/100 within the cap");
}

// ---------------------------------------------------------------- 5

void dialect_scenarios(Check& c) {
  dialect::BoundDialect json_cells(read_file(fixture("json_cells.csv")), {});
  const auto ranking = json_cells.ranking({});
  const Dialect comma{',', '"', std::nullopt};
  c.expect(ranking.size() >= 2 && ranking[1].dialect == comma && ranking[0].consistency > ranking[1].consistency,
           "comma dialect is not strictly second");
  const auto fixed = json_cells.best(InteractionSet({"fix_delimiter(,)"}));
  c.expect(dialect::BoundDialect::dialect_of(fixed) == comma, "fix_delimiter(,) did not make comma best");

  dialect::BoundDialect colors(read_file(fixture("colors.tsv")), {});
  const auto tab = colors.best(InteractionSet({colors.canonical_constraint("fix_delimiter(TAB)")}));
  const auto rows = parse_with_dialect(colors.sample(), dialect::BoundDialect::dialect_of(tab));
  bool four = !rows.empty();
  for (const auto& row : rows) four = four && row.size() == 4;
  c.expect(four, "colors rows are not 4 cells wide");

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto f = eval::dialect_fixture(seed);
    const auto candidates = dialect::candidate_dialects(f.text);
    c.expect(std::find(candidates.begin(), candidates.end(), f.target) != candidates.end(),
             "fixture " + str(seed) + " target outside the candidates");
    const auto trace = eval::drive_dialect(f.text, f.target, seed);
    c.expect(trace.interactions && *trace.interactions <= 3, "fixture " + str(seed) + " needed more than 3");
  }
}

// ---------------------------------------------------------------- 6

void escape_handling(Check& c) {
  // Counted by hand: a header plus 100 titles, each with three fields.
  constexpr std::size_t kRecords = 101;
  const auto text = read_file(fixture("movies_excerpt.csv"));
  const auto escaped = parse_with_dialect(text, Dialect{',', std::nullopt, '\\'});
  c.expect(escaped.size() == kRecords, "escape-aware parse gave " + str(escaped.size()) + " rows");
  std::size_t well_formed = 0;
  for (const auto& row : escaped) well_formed += row.size() == 3;
  c.expect(well_formed == kRecords, "escape-aware parse has ragged rows");

  // Splitting every line on ',' breaks the titles holding "\,".
  std::istringstream lines(text);
  std::size_t naive = 0;
  for (std::string line; std::getline(lines, line);)
    naive += std::count(line.begin(), line.end(), ',') == 2;
  c.expect(naive != kRecords, "naive split unexpectedly agrees");
}

// ---------------------------------------------------------------- 7

void type_scenario(Check& c) {
  ptype::BoundTypeInfer esa(read_csv(fixture("esa_amperage.csv")), 0, {});
  const auto h0 = esa.best({});
  c.expect(h0.script.front() == "type=boolean missing=[?] anomalies=[0.5,4,6]", "H0: " + h0.script.front());
  const auto h1 = esa.best(InteractionSet({"not_type(boolean)"}));
  c.expect(h1.script.front() == "type=float missing=[?] anomalies=[]", "H1: " + h1.script.front());
  c.expect(ptype::TypeModel({"yes", "no"}).best().type == ptype::PrimitiveType::boolean,
           "yes/no is not boolean");
}

// ---------------------------------------------------------------- 8

void pfsm_oracle(Check& c) {
  std::vector<std::string> strings{""}, frontier{""};
  for (int len = 1; len <= 4; ++len) {
    std::vector<std::string> next;
    for (const auto& prefix : frontier)
      for (char ch : std::string("01.a")) next.push_back(prefix + ch);
    strings.insert(strings.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  for (const auto& m : ptype::standard_machines())
    for (const auto& s : strings) {
      const double oracle = testing::path_sum(m, s);
      const double forward = pfsm_forward(m, s);
      const bool ok = oracle == 0.0 ? forward == -INFINITY : std::abs(std::exp(forward) - oracle) <= 1e-12;
      c.expect(ok, m.name() + " '" + s + "'");
    }
}

// ---------------------------------------------------------------- 9

void not_type_chain(Check& c) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto fixture_column = eval::type_fixture(seed);
    std::vector<std::string> cells = fixture_column.table.column(0).cells();
    ptype::TypeModel model(cells);
    const auto posterior = model.posterior();
    ptype::TypeConstraints h;
    double previous = 2.0;
    for (int step = 0; step < 5; ++step) {
      const auto e = model.best(h);
      const double p = posterior[static_cast<std::size_t>(e.type)];
      c.expect(p <= previous, "column " + str(seed) + " step " + str(step) + " rose");
      c.expect(!h.excluded.count(e.type), "column " + str(seed) + " repeated a type");
      previous = p;
      h.excluded.insert(e.type);
    }
    bool exhausted = false;
    try {
      model.best(h);
    } catch (const Error& e) {
      exhausted = e.code() == ErrorCode::exhausted_constraints;
    }
    c.expect(exhausted, "column " + str(seed) + " did not error after 5 exclusions");
  }
}

// ---------------------------------------------------------------- 10

void semantic_layer(Check& c) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n_s = 1 + rng() % 5, n_t = 1 + rng() % 4;
    semantic::ScoreMatrix p(n_s, std::vector<double>(n_t));
    for (auto& row : p)
      for (auto& v : row) v = unit(rng);
    semantic::SemanticConstraints h;
    for (std::size_t s = 0; s < n_s; ++s)
      for (std::size_t t = 0; t < n_t; ++t) {
        const auto k = rng() % 3;
        if (k == 1) h.is_type.insert({s, t});
        if (k == 2) h.not_type.insert({s, t});
      }
    const std::size_t s = rng() % n_s, t = rng() % n_t;
    const double expected = h.is_type.count({s, t}) ? 1.0 : h.not_type.count({s, t}) ? 0.0 : p[s][t];
    c.expect(semantic::adjusted_score(p, h, s, t) == expected, "triple " + str(trial));
  }

  const std::vector<std::string> catalog = {"dbo:Work", "dbo:Company", "dbo:Person"};
  auto scorer = std::make_shared<semantic::TableScorer>(catalog, std::vector<std::vector<double>>{{0.6, 0.5, 0.4}});
  semantic::BoundSemantic b(read_csv(fixture("isp.csv")), 0, scorer,
                            Options{{"n_samples", "4"}, {"sample_size", "1"}, {"seed", "11"}});
  c.expect(semantic::BoundSemantic::type_of(b.best({})) == "dbo:Work", "H0 is not dbo:Work");
  std::size_t virgin = b.samples().size();
  for (std::size_t s = 0; s < b.samples().size(); ++s)
    if (b.samples()[s] == semantic::Sample{"Virgin"}) virgin = s;
  c.expect(virgin < b.samples().size(), "no singleton sample holds Virgin");
  if (virgin < b.samples().size()) {
    const auto e = b.best(InteractionSet({"is_type(" + semantic::sample_ref(virgin) + ",dbo:Company)"}));
    c.expect(semantic::BoundSemantic::type_of(e) == "dbo:Company", "override did not flip to dbo:Company");
    c.expect(e.score && *e.score == 0.625, "flipped score is not 0.625");
  }
}

// ---------------------------------------------------------------- 11

void outlier_checks(Check& c) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> xs(2 + rng() % 60);
    for (auto& v : xs) {
      v = std::round(normal(rng) * 3.0);
      if (rng() % 15 == 0) v *= 40.0;
    }
    const double m = 1.0 + static_cast<double>(rng() % 3);
    long double sum = 0, ss = 0;
    for (double x : xs) sum += x;
    const double mu = static_cast<double>(sum / xs.size());
    for (double x : xs) ss += (x - mu) * (x - mu);
    const double sigma = std::sqrt(static_cast<double>(ss / xs.size()));
    std::set<double> oracle;
    if (sigma > 0)
      for (double x : xs)
        if (x <= mu - m * sigma || x >= mu + m * sigma) oracle.insert(x);
    const auto got = outlier::detect_outliers(xs, m).values;
    c.expect(std::set<double>(got.begin(), got.end()) == oracle, "column " + str(trial));
  }

  const auto aviation = read_csv(fixture("aviation.csv"));
  std::map<std::string, std::set<std::string>> by_column;
  for (const auto& f : outlier::collect_aggregate_filters(aviation, 3.0)) by_column[f.column].insert(f.value);
  c.expect(by_column["c_regis"] == std::set<std::string>{"EU28", "FR", "CH", "NEASA"}, "c_regis filters");
  c.expect(by_column["c_geo"] == std::set<std::string>{"EU28", "OTH", "FR"}, "c_geo filters");
  c.expect(by_column.size() == 2, "filters on unexpected columns");

  outlier::BoundAggregates b(aviation, {});
  auto h = b.choices({}).at(0).next;
  h = h.with(b.canonical_constraint("remove_rows(c_regis=EU28)"));
  const auto out = b.apply(b.best(h));
  bool clean = true;
  for (std::size_t r = 0; r < out.n_rows(); ++r)
    for (const auto& cell : out.row(r)) clean = clean && cell != "EU28";
  c.expect(clean && h.size() == 2, "EU28 rows survive two selections");
}

// ---------------------------------------------------------------- 12

std::string nasty(std::mt19937_64& rng) {
  static const std::string alphabet = "abXY09/,=%()\\ -_.:;|\"'\t";
  std::string s;
  for (std::size_t n = 1 + rng() % 7; n > 0; --n) s += alphabet[rng() % alphabet.size()];
  return s;
}

using Generator = std::function<Constraint(std::mt19937_64&)>;

std::vector<std::pair<std::string, Generator>> grammars() {
  return {
      {"datadiff",
       [](std::mt19937_64& rng) {
         switch (rng() % 3) {
           case 0: return print_call({"notransform", {nasty(rng)}});
           case 1: return print_call({"match", {nasty(rng), nasty(rng)}});
           default: return print_call({"nomatch", {nasty(rng), nasty(rng)}});
         }
       }},
      {"csv-dialect",
       [](std::mt19937_64& rng) {
         static const char* slots[] = {"delimiter", "quote", "escape"};
         const std::string prefix = rng() % 2 ? "fix_" : "not_";
         const auto s = nasty(rng);
         const std::optional<char> ch = rng() % 8 == 0 ? std::nullopt : std::optional<char>(s[0]);
         return dialect::canonical_dialect_constraint(print_call({prefix + slots[rng() % 3], {spell_char(ch)}}));
       }},
      {"ptype",
       [](std::mt19937_64& rng) {
         static const char* types[] = {"boolean", "integer", "float", "date", "string"};
         switch (rng() % 3) {
           case 0: return ptype::canonical_type_constraint(std::string("not_type(") + types[rng() % 5] + ")");
           case 1: return ptype::canonical_type_constraint(print_call({"not_missing", {nasty(rng)}}));
           default: return ptype::canonical_type_constraint(print_call({"not_anomaly", {nasty(rng)}}));
         }
       }},
      {"semantic-type",
       [](std::mt19937_64& rng) {
         return print_call({rng() % 2 ? "is_type" : "not_type",
                            {semantic::sample_ref(rng() % 20), "dbo:" + nasty(rng)}});
       }},
      {"outlier",
       [](std::mt19937_64& rng) {
         std::normal_distribution<double> g(0.0, 1e3);
         return outlier::remove_value_constraint(rng() % 2 ? std::round(g(rng)) : g(rng));
       }},
      {"aggregates",
       [](std::mt19937_64& rng) { return outlier::remove_rows_constraint(nasty(rng), nasty(rng)); }},
  };
}

void wire_protocol(Check& c) {
  testing::TranscriptAssistant stub;
  std::istringstream in(
      "reference=/temp/bb15nice.csv,input=/temp/bb14.csv\nchoices\nnotransform(LLU)\n");
  std::ostringstream out;
  wire::run_process_loop(stub, in, out);
  c.expect(out.str() ==
               "Don't transform 'Urban.rural'\n"
               "notransform(LLU)/notransform(Urban.rural)\n"
               "Don't match 'Nation' and 'Urban.rural'\n"
               "notransform(LLU)/nomatch(Nation,Urban.rural)\n"
               "\n",
           "transcript response differs: " + out.str());

  for (const auto& [name, generate] : grammars()) {
    std::mt19937_64 rng(std::hash<std::string>{}(name));
    for (int k = 0; k < 1000; ++k) {
      const Constraint constraint = generate(rng);
      wire::Request request{{{"input", "/tmp/" + nasty(rng)}},
                            static_cast<wire::Command>(k % 3),
                            InteractionSet({constraint, generate(rng)})};
      const auto decoded = wire::decode_request(wire::encode_request(request));
      c.expect(decoded == request, name + ": " + constraint);
      c.expect(split_constraints(join_constraints({constraint})) == std::vector<std::string>{constraint},
               name + " split: " + constraint);
    }
  }
}

// ---------------------------------------------------------------- 13

struct Binding {
  std::string assistant;
  Bindings bindings;
};

std::vector<Binding> bindings_under(const fs::path& dir) {
  std::vector<Binding> out = {
      {"datadiff", {{"input", fixture("toy_input.csv")}, {"reference", fixture("toy_reference.csv")}}},
      {"csv-dialect", {{"input", fixture("json_cells.csv")}}},
      {"csv-dialect", {{"input", fixture("movies_excerpt.csv")}}},
      {"ptype", {{"input", fixture("esa_amperage.csv")}}},
      {"semantic-type", {{"input", fixture("isp.csv")}, {"gazetteer", fixture("gazetteer.tsv")}}},
      {"outlier", {{"input", fixture("esa_amperage.csv")}}},
      {"aggregates", {{"input", fixture("aviation.csv")}}},
  };
  for (std::uint64_t seed : {3u, 4u}) {
    const auto table = seed % 2 ? eval::adult_like(120, seed) : eval::iris_like(150, seed);
    const auto c = eval::corrupt(table, seed, eval::CorruptionMode::all);
    const auto input = (dir / ("input" + str(seed) + ".csv")).string();
    const auto reference = (dir / ("reference" + str(seed) + ".csv")).string();
    write_csv(c.corrupted, input);
    write_csv(c.clean, reference);
    out.push_back({"datadiff", {{"input", input}, {"reference", reference}}});
  }
  return out;
}

std::string cli_script(const Binding& b, const InteractionSet& h) {
  std::vector<std::string> args = {b.assistant};
  for (const auto& [slot, path] : b.bindings.entries()) args.insert(args.end(), {"--" + slot, path});
  for (const auto& k : h.constraints()) args.insert(args.end(), {"--constraint", k});
  std::istringstream in;
  std::ostringstream out, err;
  if (tools::cli_run(args, in, out, err) != 0) return "cli error: " + err.str();
  auto text = out.str();
  // csv-dialect follows the script with its ranking after a blank line.
  if (auto blank = text.find("\n\n"); blank != std::string::npos) text.resize(blank + 1);
  return text;
}

std::string wire_script(const Binding& b, const InteractionSet& h) {
  wire::Request request{b.bindings, wire::Command::best, h};
  std::istringstream in(joined(wire::encode_request(request)));
  std::ostringstream out;
  wire::run_process_loop(default_registry().find(b.assistant), in, out);
  auto text = out.str();
  return text.size() >= 1 ? text.substr(0, text.size() - 1) : text;
}

std::string http_script(httplib::Client& client, const Binding& b, const InteractionSet& h) {
  json bindings = json::object();
  for (const auto& [slot, path] : b.bindings.entries()) bindings[slot] = path;
  auto res = client.Post("/sessions", json{{"assistant", b.assistant}, {"bindings", bindings}}.dump(),
                         "application/json");
  if (!res || res->status != 201) return "http error on create";
  auto view = json::parse(res->body);
  for (const auto& k : h.constraints()) {
    res = client.Post("/sessions/" + view["session_id"].get<std::string>() + "/choice",
                      json{{"constraint", k}}.dump(), "application/json");
    if (!res || res->status != 200) return "http error on " + k;
    view = json::parse(res->body);
  }
  std::string out;
  for (const auto& line : view["expression_script"]) out += line.get<std::string>() + "\n";
  return out;
}

// The HTTP service on an ephemeral port for the lifetime of the object.
struct LocalServer {
  explicit LocalServer(service::SessionService& svc) {
    tools::install_routes(server, svc);
    port = server.bind_to_any_port("127.0.0.1");
    listener = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LocalServer() {
    server.stop();
    listener.join();
  }

  httplib::Server server;
  int port = 0;
  std::thread listener;
};

void framework_invariants(Check& c) {
  const auto dir = fs::temp_directory_path() / "wrangle_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  service::SessionService svc(default_registry());
  LocalServer local(svc);
  httplib::Client client("127.0.0.1", local.port);

  const auto registry = default_registry();
  std::set<std::string> covered;
  std::mt19937_64 rng(13);
  const auto all = bindings_under(dir);
  for (std::size_t k = 0; k < all.size(); ++k) {
    const auto& b = all[k];
    covered.insert(b.assistant);
    auto bound = registry.find(b.assistant).bind(b.bindings, {});
    const std::string tag = b.assistant + "#" + str(k);
    for (int set = 0; set < 100; ++set) {
      // Random walk through offered choices; depth grows with the set index.
      InteractionSet h;
      try {
        for (int depth = set % 6; depth > 0; --depth) {
          const auto choices = bound->choices(h);
          if (choices.empty()) break;
          h = choices[rng() % choices.size()].next;
        }
        const auto best = bound->best(h);
        c.expect(bound->valid(best, h), tag + " invalid best for H=" + h.encode());
        for (const auto& choice : bound->choices(h))
          c.expect(choice.next.extends_by_one(h), tag + " choice '" + choice.label + "' for H=" + h.encode());
        if (set % 4 == 0) {
          const auto expected = best.script_text();
          c.expect(cli_script(b, h) == expected, tag + " CLI differs for H=" + h.encode());
          c.expect(wire_script(b, h) == expected, tag + " wire differs for H=" + h.encode());
          c.expect(http_script(client, b, h) == expected, tag + " HTTP differs for H=" + h.encode());
        }
      } catch (const Error& e) {
        // Offered choices must never lead into a contradiction.
        c.expect(false, tag + " H=" + h.encode() + ": " + e.what());
      }
    }
  }
  c.expect(covered.size() == registry.list().size(), "not every assistant was exercised");
  fs::remove_all(dir);
}

struct Criterion {
  int number;
  std::string name;
  std::chrono::milliseconds budget;
  void (*run)(Check&);
};

}  // namespace

int main() {
  using namespace std::chrono_literals;
  const std::vector<Criterion> criteria = {
      {1, "toy merge regression", 1s, toy_merge},
      {2, "assignment matches brute force", 10s, assignment_oracle},
      {3, "KS and TV match direct definitions", 10s, distance_oracles},
      {4, "oracle-guided reconciliation", 120s, reconciliation},
      {5, "dialect scenarios", 10s, dialect_scenarios},
      {6, "escape handling", 10s, escape_handling},
      {7, "type inference scenario", 1s, type_scenario},
      {8, "PFSM forward matches path enumeration", 10s, pfsm_oracle},
      {9, "not_type chain", 10s, not_type_chain},
      {10, "semantic layer", 10s, semantic_layer},
      {11, "outlier detection and aggregates", 10s, outlier_checks},
      {12, "wire protocol", 10s, wire_protocol},
      {13, "framework invariants and front-end agreement", 120s, framework_invariants},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    check.expect(elapsed <= criterion.budget, "took " + str(elapsed.count()) + " ms");
    const bool ok = check.ok();
    failed += !ok;
    std::cout << (ok ? "PASS " : "FAIL ") << criterion.number << ". " << criterion.name << " ("
              << elapsed.count() << " ms)";
    if (!ok) std::cout << ": " << check.summary();
    std::cout << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
