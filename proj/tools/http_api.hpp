#pragma once

#include "wrangle/error.hpp"
#include "wrangle/service.hpp"

namespace httplib {
class Server;
}

namespace wrangle::tools {

/// 404 for unknown sessions or assistants, 409 for stale choices, closed
/// sessions and conflicting constraints, 400 otherwise.
int http_status(ErrorCode code);

/// Registers the session endpoints:
///   GET  /assistants
///   POST /sessions                 JSON {assistant, bindings, options} or multipart
///   GET  /sessions/{id}
///   POST /sessions/{id}/choice     JSON {index[, revision]} or {constraint}
///   POST /sessions/{id}/accept
///   GET  /sessions/{id}/result     ?format=csv (default) or script
void install_routes(httplib::Server& server, service::SessionService& service);

}  // namespace wrangle::tools
