// concierge: REPL, one-shot turns and the HTTP service.

#include <CLI11.hpp>
#include <httplib.h>
#include <unistd.h>

#include <cstdlib>
#include <iostream>

#include "concierge/catalog_store.hpp"
#include "concierge/engine.hpp"
#include "concierge/error.hpp"
#include "concierge/http_api.hpp"
#include "concierge/text.hpp"

using namespace concierge;

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : std::move(fallback);
}

void print_turn(std::ostream& out, const api::TurnResponse& r) {
  out << "route: " << parse::to_string(r.parsed.route) << " (" << r.parsed.verb_lemma;
  if (r.parsed.object)
    out << ", object " << *r.parsed.object << ": " << parse::to_string(r.parsed.object_category);
  out << ")\n";
  out << "emotion: " << (r.emotion.emotion ? egc::to_string(*r.emotion.emotion) : "none") << " "
      << egc::to_string(r.emotion.valence) << " " << format_fixed(r.emotion.intensity) << "\n";
  out << "mood: " << r.mood << "\n";
  std::string rules;
  for (const auto& f : r.fired_rules) rules += (rules.empty() ? "" : " ") + f;
  out << "rules: " << rules << "\n";
  for (std::size_t i = 0; i < r.recommendations.size(); ++i) {
    const auto& rec = r.recommendations[i];
    out << "  " << i + 1 << ". " << rec.name << " [" << rules::to_string(rec.kind) << "] "
        << format_fixed(rec.strength) << "  " << rec.rationale;
    if (!rec.nearby.empty()) {
      std::string near;
      for (const auto& n : rec.nearby) near += (near.empty() ? "" : ", ") + n;
      out << "  near " << near;
    }
    out << "\n";
  }
  if (!r.taboo.empty()) {
    std::string t;
    for (const auto& x : r.taboo) t += (t.empty() ? "" : ", ") + x;
    out << "taboo: " << t << "\n";
  }
  out << "reply: " << r.directive << "\n";
}

int fail(const Error& e) {
  std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
  return e.code() == ErrorCode::kValidation || e.code() == ErrorCode::kEmptyUtterance ? 2 : 1;
}

api::ConciergeEngine make_engine(const std::string& data, std::optional<double> lambda) {
  api::EngineOptions opts;
  opts.lambda = lambda;
  auto bundle = store::load_bundle(data);
  for (const auto& w : bundle.warnings) std::cerr << "warning: " << w << "\n";
  return api::ConciergeEngine(std::move(bundle), opts);
}

int repl(const api::ConciergeEngine& engine, std::optional<std::string> person) {
  auto state = engine.new_session("repl", std::move(person));
  const bool interactive = isatty(STDIN_FILENO) != 0;
  std::string line;
  for (;;) {
    std::cout << "> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    if (!interactive) std::cout << line << "\n";
    const auto cmd = normalize_term(line);
    if (cmd.empty()) continue;
    if (cmd == ":quit" || cmd == ":q") return 0;
    if (cmd == ":state") {
      std::cout << store::to_json(state).dump(2) << "\n";
      continue;
    }
    if (cmd == ":help") {
      std::cout << "type an utterance, or :state, :quit\n";
      continue;
    }
    if (cmd.front() == ':') {
      std::cout << "unknown command " << cmd << " (try :help)\n";
      continue;
    }
    try {
      print_turn(std::cout, engine.take_turn(state, line));
    } catch (const Error& e) {
      std::cout << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    }
  }
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tourist concierge dialog engine"};
  app.require_subcommand(1);

  std::string data = env_or("CONCIERGE_DATA", "");
  std::optional<std::string> person;
  std::optional<double> lambda;
  std::string text, flags_json;
  bool json = false;
  std::string addr = env_or("CONCIERGE_ADDR", "127.0.0.1:8080");
  std::string sessions_dir = "sessions";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--data", data, "Data bundle directory (default: $CONCIERGE_DATA)");
    sub->add_option("--lambda", lambda, "Rule-net firing threshold")->check(CLI::Range(0.0, 1.0));
  };

  auto* repl_cmd = app.add_subcommand("repl", "Interactive dialog; ':state' shows the session, ':quit' exits");
  add_common(repl_cmd);
  repl_cmd->add_option("--person", person, "Person id for personal favorite values");

  auto* once = app.add_subcommand("once", "Evaluate a single utterance");
  add_common(once);
  once->add_option("--person", person, "Person id for personal favorite values");
  once->add_option("--text", text, "Utterance")->required();
  once->add_option("--flags", flags_json, "Situation flags as JSON");
  once->add_flag("--json", json, "Print the turn response as JSON");

  auto* serve = app.add_subcommand("serve", "Run the HTTP JSON service");
  add_common(serve);
  serve->add_option("--addr", addr, "host:port (default: $CONCIERGE_ADDR or 127.0.0.1:8080)");
  serve->add_option("--sessions", sessions_dir, "Session snapshot directory");

  CLI11_PARSE(app, argc, argv);

  if (data.empty()) {
    std::cerr << "error: no data directory; pass --data or set CONCIERGE_DATA\n";
    return 2;
  }

  try {
    const auto engine = make_engine(data, lambda);
    if (repl_cmd->parsed()) return repl(engine, person);

    if (once->parsed()) {
      egc::SituationFlags flags;
      if (!flags_json.empty()) {
        try {
          flags = store::flags_from_json(store::Json::parse(flags_json));
        } catch (const store::Json::parse_error& e) {
          throw Error(ErrorCode::kValidation, std::string("bad --flags JSON: ") + e.what(), "--flags");
        }
      }
      auto state = engine.new_session("once", person);
      const auto r = engine.take_turn(state, text, flags);
      if (json) std::cout << api::to_json(r).dump(2) << "\n";
      else print_turn(std::cout, r);
      return 0;
    }

    const auto where = api::parse_address(addr);
    store::SessionStore sessions(sessions_dir);
    api::SessionService service(engine, sessions);
    httplib::Server server;
    api::register_routes(server, service);
    if (!server.bind_to_port(where.host, where.port)) {
      std::cerr << "error: cannot listen on " << where.host << ":" << where.port
                << " (address in use or not permitted)\n";
      return 3;
    }
    std::cerr << "listening on " << where.host << ":" << where.port << "\n";
    return server.listen_after_bind() ? 0 : 3;
  } catch (const Error& e) {
    return fail(e);
  }
}
