#include "concierge/http_api.hpp"

#include <httplib.h>

#include "concierge/error.hpp"

namespace concierge::api {

namespace {

using store::Json;

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kValidation:
    case ErrorCode::kEmptyUtterance:
    case ErrorCode::kUnsupportedRuleType:
      return 400;
    case ErrorCode::kNoCandidates:
      return 422;
    case ErrorCode::kBudgetExceeded:
    case ErrorCode::kIntegrity:
    case ErrorCode::kIo:
      return 500;
  }
  return 500;
}

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, ErrorCode code, const std::string& message, const std::string& detail) {
  reply(res, status_for(code), Json{{"code", std::string(to_string(code))}, {"message", message}, {"detail", detail}});
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    auto j = Json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::kValidation, "request body must be a JSON object", "body");
    return j;
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kValidation, std::string("malformed JSON body: ") + e.what(), "body");
  }
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      reply_error(res, e.code(), e.what(), e.detail());
    } catch (const Json::exception& e) {
      reply_error(res, ErrorCode::kValidation, e.what(), "body");
    }
  };
}

}  // namespace

void register_routes(httplib::Server& server, SessionService& service) {
  server.Post("/api/v1/sessions", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                const auto body = parse_body(req);
                std::optional<std::string> person;
                if (body.contains("person_id") && !body["person_id"].is_null()) {
                  if (!body["person_id"].is_string())
                    throw Error(ErrorCode::kValidation, "person_id must be a string", "person_id");
                  person = body["person_id"].get<std::string>();
                }
                reply(res, 201, Json{{"session_id", service.create(person)}});
              }));

  server.Post(R"(/api/v1/sessions/([^/]+)/utterances)",
              guarded([&service](const httplib::Request& req, httplib::Response& res) {
                const std::string id = req.matches[1];
                if (!service.exists(id)) throw Error(ErrorCode::kNotFound, "unknown session '" + id + "'", id);
                const auto body = parse_body(req);
                if (!body.contains("text") || !body["text"].is_string())
                  throw Error(ErrorCode::kEmptyUtterance, "text is required", "text");
                egc::SituationFlags flags;
                if (body.contains("flags") && !body["flags"].is_null()) flags = store::flags_from_json(body["flags"]);
                reply(res, 200, to_json(service.utter(id, body["text"].get<std::string>(), flags)));
              }));

  server.Get(R"(/api/v1/sessions/([^/]+))", guarded([&service](const httplib::Request& req, httplib::Response& res) {
               reply(res, 200, store::to_json(service.get(req.matches[1])));
             }));

  server.Delete(R"(/api/v1/sessions/([^/]+))",
                guarded([&service](const httplib::Request& req, httplib::Response& res) {
                  service.remove(req.matches[1]);
                  res.status = 204;
                }));

  server.Get("/api/v1/sessions", guarded([&service](const httplib::Request&, httplib::Response& res) {
               reply(res, 200, Json{{"sessions", service.list()}});
             }));

  server.Get("/api/v1/catalog", guarded([&service](const httplib::Request&, httplib::Response& res) {
               reply(res, 200, service.engine().catalog_summary());
             }));
}

ListenAddress parse_address(const std::string& text) {
  ListenAddress a;
  std::string port = text;
  if (auto colon = text.rfind(':'); colon != std::string::npos) {
    if (colon > 0) a.host = text.substr(0, colon);
    port = text.substr(colon + 1);
  }
  try {
    std::size_t used = 0;
    a.port = std::stoi(port, &used);
    if (used != port.size() || a.port < 0 || a.port > 65535) throw std::out_of_range("port");
  } catch (const std::exception&) {
    throw Error(ErrorCode::kValidation, "bad listen address '" + text + "'", "addr");
  }
  return a;
}

}  // namespace concierge::api
