#include "http_api.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

namespace wrangle::tools {

namespace {

using nlohmann::json;

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  send_json(res, {{"error", std::string(code)}, {"message", message}}, status);
}

// Runs a handler, turning library errors into JSON error responses.
template <typename F>
auto guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), to_string(e.code()), e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, "bad request", e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, "internal error", e.what());
    }
  };
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  auto body = json::parse(req.body);
  if (!body.is_object()) throw Error(ErrorCode::invalid_argument, "request body must be a JSON object");
  return body;
}

Options options_of(const json& object) {
  Options options;
  for (const auto& [key, value] : object.items())
    options.set(key, value.is_string() ? value.get<std::string>() : value.dump());
  return options;
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_found:
    case ErrorCode::unknown_assistant: return 404;
    case ErrorCode::stale_choice:
    case ErrorCode::session_closed:
    case ErrorCode::conflicting_constraints:
    case ErrorCode::exhausted_constraints: return 409;
    default: return 400;
  }
}

void install_routes(httplib::Server& server, service::SessionService& service) {
  server.Get("/assistants", guarded([&](const httplib::Request&, httplib::Response& res) {
    send_json(res, service.list_assistants());
  }));

  server.Post("/sessions", guarded([&](const httplib::Request& req, httplib::Response& res) {
    if (req.is_multipart_form_data()) {
      std::string assistant;
      Options options;
      std::map<std::string, service::Upload> uploads;
      for (const auto& [name, part] : req.files) {
        if (name == "assistant") {
          assistant = part.content;
        } else if (!part.filename.empty()) {
          uploads[name] = {part.filename, part.content};
        } else {
          options.set(name, part.content);
        }
      }
      if (assistant.empty()) throw Error(ErrorCode::invalid_argument, "missing 'assistant' field");
      send_json(res, service.create_from_uploads(assistant, uploads, options), 201);
      return;
    }
    const json body = body_of(req);
    const json slots = body.value("bindings", json::object());
    Bindings bindings;
    for (const auto& [slot, path] : slots.items()) bindings.set(slot, path.get<std::string>());
    send_json(res,
              service.create(body.at("assistant").get<std::string>(), bindings,
                             options_of(body.value("options", json::object()))),
              201);
  }));

  server.Get(R"(/sessions/([^/]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
    send_json(res, service.get(req.matches[1]));
  }));

  server.Post(R"(/sessions/([^/]+)/choice)", guarded([&](const httplib::Request& req, httplib::Response& res) {
    const json body = body_of(req);
    if (body.contains("constraint")) {
      send_json(res, service.add_constraint(req.matches[1], body["constraint"].get<std::string>()));
      return;
    }
    const auto index = body.at("index").get<long long>();
    if (index < 0) throw Error(ErrorCode::out_of_range, "choice index must be non-negative");
    std::optional<std::uint64_t> revision;
    if (body.contains("revision")) revision = body["revision"].get<std::uint64_t>();
    send_json(res, service.choose(req.matches[1], static_cast<std::size_t>(index), revision));
  }));

  server.Post(R"(/sessions/([^/]+)/accept)", guarded([&](const httplib::Request& req, httplib::Response& res) {
    send_json(res, service.accept(req.matches[1]));
  }));

  server.Get(R"(/sessions/([^/]+)/result)", guarded([&](const httplib::Request& req, httplib::Response& res) {
    const std::string format = req.has_param("format") ? req.get_param_value("format") : "csv";
    if (format == "script") {
      res.set_content(service.result_script(req.matches[1]), "text/plain");
    } else if (format == "csv") {
      res.set_header("Content-Disposition", "attachment; filename=\"result.csv\"");
      res.set_content(service.result_csv(req.matches[1]), "text/csv");
    } else {
      throw Error(ErrorCode::invalid_argument, "format must be csv or script");
    }
  }));
}

}  // namespace wrangle::tools
