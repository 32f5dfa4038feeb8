#include "wrangle/service.hpp"

#include <cctype>
#include <filesystem>
#include <random>
#include <sstream>

#include "wrangle/csv.hpp"
#include "wrangle/encoding.hpp"
#include "wrangle/error.hpp"
#include "wrangle/wire.hpp"

namespace wrangle::service {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kReplayExtension = ".replay";

std::string after_colon(const std::string& line, std::size_t colon) { return trim(line.substr(colon + 1)); }

// Keeps only the last path component and characters safe in file names.
std::string safe_name(std::string_view name) {
  auto slash = name.find_last_of("/\\");
  if (slash != std::string_view::npos) name = name.substr(slash + 1);
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_') ? c : '_';
  if (out.empty() || out.front() == '.') out = "upload" + out;
  return out;
}

}  // namespace

std::string ReplayScript::to_text() const {
  std::string out = "assistant: " + assistant + "\n";
  out += "bindings: " + wire::encode_bindings(bindings) + "\n";
  for (const auto& [key, value] : options.values()) out += "option: " + key + "=" + value + "\n";
  for (const auto& c : constraints) out += "constraint: " + c + "\n";
  if (accepted) out += "accepted: true\n";
  return out;
}

ReplayScript ReplayScript::parse(std::string_view text) {
  ReplayScript script;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  bool have_assistant = false;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw Error(ErrorCode::parse_error, "replay line " + std::to_string(number) + ": expected key: value");
    const std::string key = line.substr(0, colon);
    const std::string value = after_colon(line, colon);
    if (key == "assistant") {
      script.assistant = value;
      have_assistant = true;
    } else if (key == "bindings") {
      script.bindings = wire::decode_bindings(value);
    } else if (key == "option") {
      auto eq = value.find('=');
      if (eq == std::string::npos || eq == 0)
        throw Error(ErrorCode::parse_error, "replay line " + std::to_string(number) + ": expected key=value");
      script.options.set(trim(value.substr(0, eq)), trim(value.substr(eq + 1)));
    } else if (key == "constraint") {
      if (value.empty()) throw Error(ErrorCode::parse_error, "replay line " + std::to_string(number) + ": empty constraint");
      script.constraints.push_back(value);
    } else if (key == "accepted") {
      script.accepted = value == "true";
    } else {
      throw Error(ErrorCode::parse_error, "replay line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
  }
  if (!have_assistant) throw Error(ErrorCode::parse_error, "replay script names no assistant");
  return script;
}

ReplayScript ReplayScript::load(const std::string& path) { return parse(read_file(path)); }

void ReplayScript::save(const std::string& path) const { write_file(path, to_text()); }

ReplayScript replay_script_of(const Session& session) {
  ReplayScript s;
  s.assistant = session.assistant().id;
  s.bindings = session.bindings();
  s.options = session.options();
  s.constraints = session.history();
  s.accepted = session.status() == SessionStatus::accepted;
  return s;
}

std::unique_ptr<Session> replay(const Registry& registry, const ReplayScript& script,
                                std::string session_id) {
  auto session = std::make_unique<Session>(std::move(session_id), registry.find(script.assistant),
                                           script.bindings, script.options);
  for (const auto& c : script.constraints) session->select_constraint(c);
  session->step();
  if (script.accepted) session->accept();
  return session;
}

nlohmann::json session_view(Session& session) {
  using nlohmann::json;
  const Recommendation& rec = session.step();
  json view;
  view["session_id"] = session.id();
  view["assistant"] = session.assistant().id;
  view["status"] = std::string(to_string(session.status()));
  view["revision"] = session.revision();
  view["expression_script"] = rec.expression.script;
  view["score"] = rec.expression.score ? json(*rec.expression.score) : json(nullptr);

  json preview;
  preview["header"] = rec.preview.header;
  preview["rows"] = rec.preview.rows;
  preview["total_rows"] = rec.preview.total_rows;
  preview["badges"] = json::array();
  for (const auto& b : rec.preview.annotations)
    preview["badges"].push_back({{"type", b.type}, {"missing", b.missing}, {"anomalies", b.anomalies}});
  view["preview"] = std::move(preview);

  view["choices"] = json::array();
  if (session.status() == SessionStatus::active) {
    for (std::size_t i = 0; i < rec.choices.size(); ++i)
      view["choices"].push_back({{"index", i}, {"label", rec.choices[i].label}});
  }
  view["history"] = session.history();
  return view;
}

SessionService::SessionService(Registry registry, std::string data_dir)
    : registry_(std::move(registry)), data_dir_(std::move(data_dir)) {
  if (!data_dir_.empty()) fs::create_directories(fs::path(data_dir_) / "sessions");
}

nlohmann::json SessionService::list_assistants() const {
  auto out = nlohmann::json::array();
  for (const auto& d : registry_.list())
    out.push_back({{"id", d.id}, {"name", d.display_name}, {"input_slots", d.input_slots}});
  return out;
}

std::string SessionService::fresh_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex_);
  std::ostringstream id;
  id << std::hex << rng() << "-" << ++counter_;
  return id.str();
}

nlohmann::json SessionService::insert(std::unique_ptr<Session> session) {
  auto e = std::make_shared<Entry>();
  e->session = std::move(session);
  std::lock_guard entry_lock(e->mutex);
  auto view = session_view(*e->session);
  persist(*e->session);
  {
    std::lock_guard lock(mutex_);
    sessions_[e->session->id()] = e;
  }
  return view;
}

nlohmann::json SessionService::create(const std::string& assistant, const Bindings& bindings,
                                      const Options& options) {
  const Assistant& a = registry_.find(assistant);
  return insert(std::make_unique<Session>(fresh_id(), a, bindings, options));
}

nlohmann::json SessionService::create_from_uploads(const std::string& assistant,
                                                   const std::map<std::string, Upload>& uploads,
                                                   const Options& options) {
  const Assistant& a = registry_.find(assistant);
  const std::string id = fresh_id();
  const fs::path base = data_dir_.empty() ? fs::temp_directory_path() / "wrangle-uploads" : fs::path(data_dir_) / "uploads";
  const fs::path dir = base / id;
  Bindings bindings;
  for (const auto& [slot, upload] : uploads) {
    if (upload.content.size() > kMaxUploadBytes)
      throw Error(ErrorCode::invalid_argument, "upload for '" + slot + "' exceeds 50 MB");
    fs::create_directories(dir);
    const auto path = dir / (safe_name(slot) + "-" + safe_name(upload.filename));
    write_file(path.string(), upload.content);
    bindings.set(slot, path.string());
  }
  return insert(std::make_unique<Session>(id, a, bindings, options));
}

std::shared_ptr<SessionService::Entry> SessionService::entry(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::not_found, "no session '" + id + "'");
  return it->second;
}

nlohmann::json SessionService::get(const std::string& id) {
  auto e = entry(id);
  std::lock_guard lock(e->mutex);
  return session_view(*e->session);
}

nlohmann::json SessionService::choose(const std::string& id, std::size_t index,
                                      std::optional<std::uint64_t> revision) {
  auto e = entry(id);
  std::lock_guard lock(e->mutex);
  e->session->select(index, revision);
  auto view = session_view(*e->session);
  persist(*e->session);
  return view;
}

nlohmann::json SessionService::add_constraint(const std::string& id, const std::string& constraint) {
  auto e = entry(id);
  std::lock_guard lock(e->mutex);
  e->session->select_constraint(constraint);
  auto view = session_view(*e->session);
  persist(*e->session);
  return view;
}

nlohmann::json SessionService::accept(const std::string& id) {
  auto e = entry(id);
  std::lock_guard lock(e->mutex);
  e->session->step();
  e->session->accept();
  persist(*e->session);
  return session_view(*e->session);
}

std::string SessionService::result_csv(const std::string& id) {
  auto e = entry(id);
  std::lock_guard lock(e->mutex);
  const auto& r = e->session->result();
  if (!r) throw Error(ErrorCode::no_recommendation, "session '" + id + "' has not been accepted");
  return to_csv(r->output);
}

std::string SessionService::result_script(const std::string& id) {
  auto e = entry(id);
  std::lock_guard lock(e->mutex);
  const auto& r = e->session->result();
  if (!r) throw Error(ErrorCode::no_recommendation, "session '" + id + "' has not been accepted");
  return r->script_text;
}

std::vector<std::string> SessionService::ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, e] : sessions_) out.push_back(id);
  return out;
}

void SessionService::persist(const Session& session) const {
  if (data_dir_.empty()) return;
  const auto path = fs::path(data_dir_) / "sessions" / (session.id() + std::string(kReplayExtension));
  replay_script_of(session).save(path.string());
}

std::size_t SessionService::restore() {
  if (data_dir_.empty()) return 0;
  std::size_t restored = 0;
  for (const auto& file : fs::directory_iterator(fs::path(data_dir_) / "sessions")) {
    if (file.path().extension() != kReplayExtension) continue;
    const std::string id = file.path().stem().string();
    auto e = std::make_shared<Entry>();
    e->session = replay(registry_, ReplayScript::load(file.path().string()), id);
    std::lock_guard lock(mutex_);
    if (sessions_.emplace(id, std::move(e)).second) ++restored;
  }
  return restored;
}

}  // namespace wrangle::service
