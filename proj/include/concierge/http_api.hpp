#pragma once

// JSON-over-HTTP front for SessionService under /api/v1.

#include <string>

#include "concierge/engine.hpp"

namespace httplib {
class Server;
}

namespace concierge::api {

/// Error bodies are {"code", "message", "detail"}; 400 for validation and
/// empty utterances, 404 for unknown sessions.
void register_routes(httplib::Server& server, SessionService& service);

struct ListenAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// "host:port", ":port" or "port". Throws Error(kValidation).
ListenAddress parse_address(const std::string& text);

}  // namespace concierge::api
