#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wrangle/assistant.hpp"

namespace wrangle::service {

/// A session reduced to what is needed to rebuild it:
///
///   assistant: datadiff
///   bindings: input=/data/a.csv,reference=/data/b.csv
///   option: seed=7
///   constraint: notransform(2)
///   accepted: true
///
/// Lines starting with '#' and blank lines are ignored.
struct ReplayScript {
  std::string assistant;
  Bindings bindings;
  Options options;
  std::vector<Constraint> constraints;
  bool accepted = false;

  std::string to_text() const;
  /// Throws parse_error.
  static ReplayScript parse(std::string_view text);
  static ReplayScript load(const std::string& path);
  void save(const std::string& path) const;

  bool operator==(const ReplayScript&) const = default;
};

ReplayScript replay_script_of(const Session& session);

/// Builds a session and feeds it the script's constraints in order. The
/// session is accepted only when the script says so.
std::unique_ptr<Session> replay(const Registry& registry, const ReplayScript& script,
                                std::string session_id = "replay");

/// JSON view of a session: session_id, assistant, status, revision,
/// expression_script, score, preview, choices[{index,label}], history.
nlohmann::json session_view(Session& session);

/// Uploaded dataset: original file name plus bytes.
struct Upload {
  std::string filename;
  std::string content;
};

/// In-memory session store. Each session has its own lock, so calls on
/// different sessions run concurrently; calls on one session are
/// serialized. With a data directory every change is written out as a
/// ReplayScript and `restore()` rebuilds the sessions found there.
class SessionService {
 public:
  static constexpr std::size_t kMaxUploadBytes = 50u << 20;

  explicit SessionService(Registry registry, std::string data_dir = {});

  nlohmann::json list_assistants() const;

  /// Throws unknown_assistant, missing_binding, io_error, parse_error.
  nlohmann::json create(const std::string& assistant, const Bindings& bindings,
                        const Options& options = {});
  /// Writes the uploads below the data (or temp) directory, then creates.
  nlohmann::json create_from_uploads(const std::string& assistant,
                                     const std::map<std::string, Upload>& uploads,
                                     const Options& options = {});

  /// Throws not_found.
  nlohmann::json get(const std::string& id);
  /// Throws not_found, stale_choice, out_of_range, session_closed.
  nlohmann::json choose(const std::string& id, std::size_t index,
                        std::optional<std::uint64_t> revision = {});
  nlohmann::json add_constraint(const std::string& id, const std::string& constraint);
  nlohmann::json accept(const std::string& id);

  /// Cleaned CSV and expression script of an accepted session; throws
  /// not_found or no_recommendation when not accepted yet.
  std::string result_csv(const std::string& id);
  std::string result_script(const std::string& id);

  std::vector<std::string> ids() const;
  std::size_t restore();
  const Registry& registry() const { return registry_; }

 private:
  struct Entry {
    std::mutex mutex;
    std::unique_ptr<Session> session;
  };

  std::shared_ptr<Entry> entry(const std::string& id) const;
  std::string fresh_id();
  void persist(const Session& session) const;
  nlohmann::json insert(std::unique_ptr<Session> session);

  Registry registry_;
  std::string data_dir_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t counter_ = 0;
};

}  // namespace wrangle::service
