#include "concierge/engine.hpp"

#include "concierge/error.hpp"

namespace concierge::api {

namespace {

const char* const kConsequents[] = {
    "recommend-spot",      "recommend-alt-spot", "recommend-positive-spot", "recommend-few-spots",
    "recommend-food-gift", "continue-talk",      "reroute-case1",           "reroute-case2",
    "reroute-case3",
};

}  // namespace

store::Json to_json(const TurnResponse& r) {
  using store::Json;
  Json recs = Json::array();
  for (const auto& rec : r.recommendations) recs.push_back(store::to_json(rec));
  return Json{
      {"session_id", r.session_id},
      {"reply", r.directive},
      {"route", std::string(parse::to_string(r.parsed.route))},
      {"verb", r.parsed.verb_lemma},
      {"object", r.parsed.object ? Json(*r.parsed.object) : Json(nullptr)},
      {"object_category", std::string(parse::to_string(r.parsed.object_category))},
      {"event_type", std::string(egc::to_string(r.parsed.frame.event_type))},
      {"nouns", r.parsed.nouns},
      {"emotion", store::to_json(r.emotion)},
      {"profile", store::to_json(r.profile)},
      {"mood", r.mood},
      {"mood_trigger", r.mood_trigger},
      {"recommendations", recs},
      {"taboo", r.taboo},
      {"captured", r.captured},
      {"fired_rules", r.fired_rules},
      {"net", Json{{"fired_rules", r.net_rules}, {"degrees", r.net_degrees}}},
      {"diagnostics", r.diagnostics},
  };
}

ConciergeEngine::ConciergeEngine(store::CatalogBundle bundle, EngineOptions options)
    : bundle_(std::move(bundle)),
      net_(rules::compile_concierge_net(bundle_.rules)),
      lambda_(options.lambda.value_or(bundle_.rules.lambda)),
      rho_(options.rho) {
  if (!(lambda_ >= 0.0 && lambda_ <= 1.0)) throw Error(ErrorCode::kValidation, "lambda outside [0,1]", "lambda");
  if (!(rho_ >= 0.0 && rho_ < 1.0)) throw Error(ErrorCode::kValidation, "rho outside [0,1)", "rho");
}

store::SessionState ConciergeEngine::new_session(std::string id, std::optional<std::string> person) const {
  store::SessionState s;
  s.id = std::move(id);
  s.person = std::move(person);
  s.profile.rho = rho_;
  s.mood.id = bundle_.mstn.initial;
  return s;
}

TurnResponse ConciergeEngine::take_turn(store::SessionState& state, std::string_view text,
                                        const egc::SituationFlags& flags) const {
  TurnResponse r;
  r.session_id = state.id;
  r.parsed = parse::parse(text, bundle_.lexicon);

  egc::EgcDiagnostics egc_diag;
  r.emotion = egc::evaluate(r.parsed.frame, flags, bundle_.fv, state.person, &egc_diag);
  for (const auto& t : egc_diag.unknown_terms) r.diagnostics.push_back("no favorite value for '" + t + "'");
  if (egc_diag.subject_fallback) r.diagnostics.push_back("subject has no favorite value; object used on axis 1");

  const auto profile = affect::update_profile(state.profile, egc::emotion_to_vector20(r.emotion));
  const auto mood = affect::update_mood(state.mood, r.emotion, bundle_.mstn);
  if (mood.missing_row) r.diagnostics.push_back("no transition row for mood '" + state.mood.id + "'");

  const rules::TurnInput in{r.parsed, r.emotion, profile.vector, bundle_.fv, state.person, bundle_.catalog, state.taboo};
  auto decision = rules::decide(in, bundle_.membership, bundle_.rules);
  const auto outcome = rules::run_concierge_net(net_, rules::turn_evidence(in, bundle_.membership), lambda_);

  r.directive = decision.directive;
  r.profile = profile.vector;
  r.mood = mood.state.id;
  r.mood_trigger = mood.trigger;
  r.recommendations = decision.recommendations;
  r.taboo.assign(decision.taboo.begin(), decision.taboo.end());
  r.captured = decision.captured;
  r.fired_rules = decision.fired_rules;
  r.net_rules = outcome.fired_rules;
  for (const char* c : kConsequents) r.net_degrees[c] = fpn::query(net_.net, outcome.run.marking, c);
  r.diagnostics.insert(r.diagnostics.end(), decision.diagnostics.begin(), decision.diagnostics.end());

  state.profile = profile;
  state.mood = mood.state;
  state.taboo = std::move(decision.taboo);
  state.history.push_back({std::string(text), r.parsed.route, r.emotion, r.mood, r.recommendations, r.fired_rules,
                           r.directive});
  return r;
}

store::Json ConciergeEngine::catalog_summary() const {
  using store::Json;
  Json spots = Json::array();
  for (const auto& s : bundle_.catalog.spots)
    spots.push_back(Json{{"id", s.id}, {"name", s.name}, {"area", s.area}, {"nearby", s.nearby},
                         {"impression", store::to_json(s.impression)}});
  auto items = [](const std::vector<rules::ItemRecord>& xs) {
    Json out = Json::array();
    for (const auto& x : xs)
      out.push_back(Json{{"id", x.id}, {"name", x.name}, {"fv_term", x.fv_term}, {"nearby", x.nearby}});
    return out;
  };
  Json emotions = Json::array();
  for (auto e : egc::all_emotions()) emotions.push_back(std::string(egc::to_string(e)));
  return Json{{"spots", spots},
              {"foods", items(bundle_.catalog.foods)},
              {"gifts", items(bundle_.catalog.gifts)},
              {"emotion_order", emotions},
              {"mood_states", bundle_.mstn.states}};
}

std::string SessionService::create(std::optional<std::string> person) {
  const auto id = store_.new_id();
  std::lock_guard lock(store_.mutex_for(id));
  store_.save(engine_.new_session(id, std::move(person)));
  return id;
}

TurnResponse SessionService::utter(const std::string& id, std::string_view text, const egc::SituationFlags& flags) {
  std::lock_guard lock(store_.mutex_for(id));
  auto state = store_.load(id);
  auto response = engine_.take_turn(state, text, flags);
  store_.save(state);
  return response;
}

store::SessionState SessionService::get(const std::string& id) { return store_.load(id); }

void SessionService::remove(const std::string& id) {
  std::lock_guard lock(store_.mutex_for(id));
  store_.remove(id);
}

}  // namespace concierge::api
