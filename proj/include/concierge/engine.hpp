#pragma once

// One dialog turn: parse -> EGC -> profile/mood -> rules -> rule net.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "concierge/catalog_store.hpp"
#include "concierge/concierge_rules.hpp"

namespace concierge::api {

struct TurnResponse {
  std::string session_id;
  std::string directive;
  parse::ParsedUtterance parsed;
  egc::EmotionResult emotion;
  egc::Vector20 profile{};
  std::string mood;
  std::string mood_trigger;
  std::vector<rules::Recommendation> recommendations;
  std::vector<std::string> taboo;
  std::vector<std::string> captured;
  std::vector<std::string> fired_rules;
  std::vector<std::string> net_rules;           // labels fired by the rule net on this turn's evidence
  std::map<std::string, double> net_degrees;    // consequent propositions
  std::vector<std::string> diagnostics;
};

store::Json to_json(const TurnResponse& r);

struct EngineOptions {
  std::optional<double> lambda;  // unset: the bundle's rules config
  double rho = 0.5;
};

class ConciergeEngine {
 public:
  explicit ConciergeEngine(store::CatalogBundle bundle, EngineOptions options = {});

  store::SessionState new_session(std::string id, std::optional<std::string> person = std::nullopt) const;

  /// Runs one turn and folds it into `state`. Throws Error(kEmptyUtterance)
  /// before touching `state` when the text has no content words.
  TurnResponse take_turn(store::SessionState& state, std::string_view text,
                         const egc::SituationFlags& flags = {}) const;

  const store::CatalogBundle& bundle() const { return bundle_; }
  const rules::ConciergeNet& net() const { return net_; }
  double lambda() const { return lambda_; }

  store::Json catalog_summary() const;

 private:
  store::CatalogBundle bundle_;
  rules::ConciergeNet net_;
  double lambda_;
  double rho_;
};

/// Engine plus session store with per-session serialization. The HTTP layer
/// and the tests drive sessions through this.
class SessionService {
 public:
  SessionService(const ConciergeEngine& engine, store::SessionStore& store) : engine_(engine), store_(store) {}

  std::string create(std::optional<std::string> person = std::nullopt);
  TurnResponse utter(const std::string& id, std::string_view text, const egc::SituationFlags& flags = {});
  store::SessionState get(const std::string& id);
  void remove(const std::string& id);
  std::vector<std::string> list() const { return store_.list(); }
  bool exists(const std::string& id) const { return store_.exists(id); }

  const ConciergeEngine& engine() const { return engine_; }

 private:
  const ConciergeEngine& engine_;
  store::SessionStore& store_;
};

}  // namespace concierge::api
