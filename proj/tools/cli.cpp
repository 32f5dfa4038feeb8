#include "cli.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include "http_api.hpp"
#include "wrangle/csv.hpp"
#include "wrangle/dialect.hpp"
#include "wrangle/error.hpp"
#include "wrangle/eval.hpp"
#include "wrangle/registry.hpp"
#include "wrangle/service.hpp"
#include "wrangle/table.hpp"
#include "wrangle/wire.hpp"

namespace wrangle::tools {

namespace {

struct AssistantFlags {
  std::string input;
  std::string reference;
  std::string gazetteer;
  std::string column;
  std::vector<std::string> constraints;
  std::vector<std::string> options;
  bool interactive = false;
  std::string replay;
  std::string emit_script;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> preview_rows;
};

void put_option(Options& options, const std::string& pair) {
  const auto eq = pair.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorCode::invalid_argument, "option '" + pair + "' is not key=value");
  options.set(pair.substr(0, eq), pair.substr(eq + 1));
}

void print_preview(const Preview& p, std::ostream& out) {
  std::vector<std::size_t> width(p.header.size(), 0);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c)
      width[c] = std::max(width[c], std::min<std::size_t>(row[c].size(), 24));
  };
  widen(p.header);
  for (const auto& row : p.rows) widen(row);
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
      std::string cell = row[c].size() > 24 ? row[c].substr(0, 21) + "..." : row[c];
      out << (c ? "  " : "  ") << std::left << std::setw(static_cast<int>(width[c])) << cell;
    }
    out << '\n';
  };
  line(p.header);
  if (!p.annotations.empty()) {
    std::vector<std::string> badges;
    for (const auto& b : p.annotations) badges.push_back("[" + b.type + "]");
    line(badges);
  }
  for (const auto& row : p.rows) line(row);
  if (p.total_rows > p.rows.size())
    out << "  ... " << p.total_rows - p.rows.size() << " more rows\n";
}

void print_ranking(Session& session, std::ostream& out) {
  auto* bound = dynamic_cast<dialect::BoundDialect*>(&session.bound());
  if (!bound) return;
  out << "\nrank  consistency  pattern  type    dialect\n";
  const auto ranking = bound->ranking(session.current());
  for (std::size_t k = 0; k < ranking.size() && k < 10; ++k) {
    const auto& s = ranking[k];
    out << std::right << std::setw(4) << k + 1 << "  " << std::fixed << std::setprecision(6)
        << std::setw(11) << s.consistency << "  " << std::setprecision(3) << std::setw(7)
        << s.pattern << "  " << std::setw(6) << s.type << "  " << to_string(s.dialect) << '\n';
    out.unsetf(std::ios::fixed);
  }
}

// Runs the accept/refine loop on the terminal. Returns false when the
// analyst quits or input ends.
bool interactive_loop(Session& session, std::istream& in, std::ostream& out) {
  while (true) {
    const auto& rec = session.step();
    out << "\nPreview:\n";
    print_preview(rec.preview, out);
    out << "\nScript:\n";
    for (const auto& line : rec.expression.script) out << "  " << line << '\n';
    out << "\nChoices:\n";
    for (std::size_t k = 0; k < rec.choices.size(); ++k)
      out << "  [" << k + 1 << "] " << rec.choices[k].label << '\n';
    out << "Enter a choice number, 'a' to accept or 'q' to quit: " << std::flush;

    std::string answer;
    if (!std::getline(in, answer)) return false;
    answer.erase(0, answer.find_first_not_of(" \t"));
    answer.erase(answer.find_last_not_of(" \t\r") + 1);
    if (answer == "a") return true;
    if (answer == "q") return false;
    std::size_t k = 0;
    try {
      std::size_t used = 0;
      k = std::stoul(answer, &used);
      if (used != answer.size()) k = 0;
    } catch (const std::exception&) {
      k = 0;
    }
    if (k == 0 || k > rec.choices.size()) {
      out << "Not a choice: '" << answer << "'\n";
      continue;
    }
    session.select(k - 1);
  }
}

int run_assistant(const Registry& registry, const std::string& id, const AssistantFlags& f,
                  std::istream& in, std::ostream& out, std::ostream& err) {
  Bindings bindings;
  Options options;
  std::vector<std::string> constraints;
  if (!f.replay.empty()) {
    const auto script = service::ReplayScript::load(f.replay);
    if (script.assistant != id)
      throw Error(ErrorCode::invalid_argument,
                  "replay script is for '" + script.assistant + "', not '" + id + "'");
    bindings = script.bindings;
    options = script.options;
    constraints = script.constraints;
  }
  if (!f.input.empty()) bindings.set("input", f.input);
  if (!f.reference.empty()) bindings.set("reference", f.reference);
  if (!f.gazetteer.empty()) bindings.set("gazetteer", f.gazetteer);
  if (!f.column.empty()) options.set("column", f.column);
  if (f.seed) options.set("seed", std::to_string(*f.seed));
  if (f.preview_rows) options.set("preview_rows", std::to_string(*f.preview_rows));
  for (const auto& o : f.options) put_option(options, o);
  constraints.insert(constraints.end(), f.constraints.begin(), f.constraints.end());

  Session session("cli", registry.find(id), bindings, options);
  for (const auto& c : constraints) session.select_constraint(c);

  if (f.interactive) {
    if (!interactive_loop(session, in, out)) {
      err << "aborted without accepting\n";
      return 1;
    }
    out << '\n';
  } else {
    session.step();
  }
  const FinalResult result = session.accept();
  out << result.script_text;
  if (id == "csv-dialect") print_ranking(session, out);
  if (!f.out.empty()) write_csv(result.output, f.out);
  if (!f.emit_script.empty()) service::replay_script_of(session).save(f.emit_script);
  return 0;
}

void add_assistant_command(CLI::App& app, const AssistantDescriptor& d, AssistantFlags& f,
                           std::function<void()> action) {
  auto* cmd = app.add_subcommand(d.id, d.display_name);
  cmd->add_option("--input", f.input, "Input dataset");
  const auto& slots = d.input_slots;
  if (std::find(slots.begin(), slots.end(), "reference") != slots.end())
    cmd->add_option("--reference", f.reference, "Reference dataset");
  if (std::find(slots.begin(), slots.end(), "gazetteer") != slots.end())
    cmd->add_option("--gazetteer", f.gazetteer, "Gazetteer TSV (cell, type)");
  if (d.id == "ptype" || d.id == "semantic-type" || d.id == "outlier")
    cmd->add_option("--column", f.column, "Column name or 1-based index");
  cmd->add_option("--constraint", f.constraints, "Constraint to add to H (repeatable)");
  cmd->add_flag("--interactive", f.interactive, "Run the accept/refine loop on the terminal");
  cmd->add_option("--replay", f.replay, "Replay a recorded session script");
  cmd->add_option("--emit-script", f.emit_script, "Write the session as a replay script");
  cmd->add_option("--out", f.out, "Write the cleaned table as CSV");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--preview-rows", f.preview_rows, "Rows shown in previews");
  cmd->add_option("--option", f.options, "Assistant option key=value (repeatable)");
  cmd->callback(std::move(action));
}

int exit_code(ErrorCode code) {
  return code == ErrorCode::conflicting_constraints || code == ErrorCode::exhausted_constraints
             ? 2
             : 1;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  const Registry registry = default_registry();
  CLI::App app{"Semi-automatic data wrangling assistants", "wrangle"};
  app.require_subcommand(1);

  int status = 0;
  // Errors are thrown out of the subcommand callbacks and mapped below.
  AssistantFlags flags;
  for (const auto& d : registry.list()) {
    const std::string id = d.id;
    add_assistant_command(app, d, flags, [&, id] {
      status = run_assistant(registry, id, flags, in, out, err);
    });
  }

  std::string stdio_assistant;
  std::string stdio_out_dir;
  std::vector<std::string> stdio_options;
  auto* stdio = app.add_subcommand("stdio", "Serve one assistant over the line protocol on stdin/stdout");
  stdio->add_option("--assistant", stdio_assistant, "Assistant id")->required();
  stdio->add_option("--out-dir", stdio_out_dir, "Directory for apply outputs");
  stdio->add_option("--option", stdio_options, "Assistant option key=value (repeatable)");
  stdio->callback([&] {
    wire::ProcessOptions po;
    for (const auto& o : stdio_options) put_option(po.options, o);
    po.out_dir = stdio_out_dir;
    wire::run_process_loop(registry.find(stdio_assistant), in, out, po);
  });

  const char* env_port = std::getenv("WRANGLE_PORT");
  const char* env_dir = std::getenv("WRANGLE_DATA_DIR");
  int port = env_port ? std::atoi(env_port) : 8787;
  std::string host = "127.0.0.1";
  std::string data_dir = env_dir ? env_dir : "";
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  serve->add_option("--port", port, "Port (WRANGLE_PORT, default 8787)");
  serve->add_option("--host", host, "Address to bind");
  serve->add_option("--data-dir", data_dir, "Session and upload directory (WRANGLE_DATA_DIR)");
  serve->callback([&] {
    service::SessionService svc(default_registry(), data_dir);
    const auto restored = svc.restore();
    httplib::Server server;
    install_routes(server, svc);
    out << "listening on http://" << host << ':' << port;
    if (restored) out << " (" << restored << " sessions restored)";
    out << std::endl;
    if (!server.listen(host, port)) {
      err << "error: cannot listen on " << host << ':' << port << '\n';
      status = 1;
    }
  });

  eval::EvalConfig config;
  std::string eval_out;
  std::string eval_mode = "all";
  auto* ev = app.add_subcommand("eval", "Run the simulated-analyst evaluation");
  ev->add_option("--assistant", config.assistant, "datadiff, csv-dialect or ptype");
  ev->add_option("--cases", config.cases, "Number of cases");
  ev->add_option("--seed", config.seed, "Base seed");
  ev->add_option("--mode", eval_mode, "Corruption mode for datadiff")
      ->check(CLI::IsMember({"all", "structural"}));
  ev->add_option("--cap", config.cap, "Interaction cap before a case counts as not finished");
  ev->add_option("--threads", config.threads, "Worker threads (0 = hardware)");
  ev->add_option("--out", eval_out, "Write the report as CSV");
  ev->callback([&] {
    config.mode = eval_mode == "structural" ? eval::CorruptionMode::structural
                                            : eval::CorruptionMode::all;
    const auto rep = eval::report(eval::run_eval(config));
    out << rep.to_text();
    if (!eval_out.empty()) write_file(eval_out, rep.to_csv());
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return status;
}

}  // namespace wrangle::tools
