#include "concierge/catalog_store.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "concierge/error.hpp"
#include "concierge/text.hpp"

namespace concierge::store {

namespace fs = std::filesystem;

BundlePaths BundlePaths::in(const fs::path& dir) {
  return {dir / "catalog.json", dir / "lexicon.json", dir / "fv.json",
          dir / "membership.json", dir / "mstn.json", dir / "rules_cf.json"};
}

namespace {

using Issues = std::vector<std::string>;

void issue(Issues& out, const std::string& path, const std::string& message) {
  out.push_back((path.empty() ? "/" : path) + ": " + message);
}

std::string key_path(const std::string& base, std::string_view key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return base + "/" + escaped;
}

bool is_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

std::optional<std::string> get_string(const Json& j, const char* key, const std::string& path, Issues& out) {
  if (!j.contains(key) || !j[key].is_string()) {
    issue(out, key_path(path, key), "expected a string");
    return std::nullopt;
  }
  return j[key].get<std::string>();
}

std::vector<std::string> get_strings(const Json& j, const char* key, const std::string& path, Issues& out) {
  std::vector<std::string> v;
  if (!j.contains(key)) return v;
  if (!j[key].is_array()) {
    issue(out, key_path(path, key), "expected an array of strings");
    return v;
  }
  for (std::size_t i = 0; i < j[key].size(); ++i) {
    if (!j[key][i].is_string()) issue(out, key_path(path, key) + "/" + std::to_string(i), "expected a string");
    else v.push_back(normalize_term(j[key][i].get<std::string>()));
  }
  return v;
}

std::optional<rules::PiecewiseLinear> breakpoints(const Json& j, const std::string& path, Issues& out) {
  if (!j.is_array() || j.empty()) {
    issue(out, path, "expected a non-empty array of [x, y] pairs");
    return std::nullopt;
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& p = j[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      issue(out, path + "/" + std::to_string(i), "expected [x, y]");
      return std::nullopt;
    }
    pts.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  try {
    return rules::PiecewiseLinear(std::move(pts));
  } catch (const Error& e) {
    issue(out, path + e.detail(), e.what());
    return std::nullopt;
  }
}

Json read_json_file(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + file.string(), file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kValidation, std::string("malformed JSON: ") + e.what(), file.string());
  }
}

template <typename E, std::size_t N>
struct EnumTable {
  std::array<std::pair<E, std::string_view>, N> rows;

  std::string_view name(E e) const {
    for (const auto& [v, n] : rows)
      if (v == e) return n;
    return "?";
  }
  E parse(const Json& j, const char* what) const {
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      for (const auto& [v, n] : rows)
        if (n == s) return v;
    }
    throw Error(ErrorCode::kValidation, std::string("bad ") + what + " value " + j.dump(), what);
  }
};

constexpr EnumTable<egc::Target, 2> kTargets{{{{egc::Target::kSelf, "self"}, {egc::Target::kOther, "other"}}}};
constexpr EnumTable<egc::OtherFortune, 3> kFortunes{{{{egc::OtherFortune::kNone, "none"},
                                                      {egc::OtherFortune::kDesirable, "desirable"},
                                                      {egc::OtherFortune::kUndesirable, "undesirable"}}}};
constexpr EnumTable<egc::Prospect, 4> kProspects{{{{egc::Prospect::kNone, "none"},
                                                   {egc::Prospect::kProspective, "prospective"},
                                                   {egc::Prospect::kConfirmed, "confirmed"},
                                                   {egc::Prospect::kDisconfirmed, "disconfirmed"}}}};
constexpr EnumTable<egc::Agent, 3> kAgents{
    {{{egc::Agent::kNone, "none"}, {egc::Agent::kSelf, "self"}, {egc::Agent::kOther, "other"}}}};
constexpr EnumTable<egc::Approval, 3> kApprovals{{{{egc::Approval::kNone, "none"},
                                                   {egc::Approval::kApproved, "approved"},
                                                   {egc::Approval::kDisapproved, "disapproved"}}}};

[[noreturn]] void integrity(const std::string& what) { throw Error(ErrorCode::kValidation, what); }

}  // namespace

rules::Catalog catalog_from_json(const Json& j, Issues& out) {
  rules::Catalog c;
  if (!j.is_object()) {
    issue(out, "", "expected an object");
    return c;
  }
  if (!j.contains("spots") || !j["spots"].is_array()) issue(out, "/spots", "expected an array");
  else {
    for (std::size_t i = 0; i < j["spots"].size(); ++i) {
      const auto& s = j["spots"][i];
      const std::string path = "/spots/" + std::to_string(i);
      if (!s.is_object()) {
        issue(out, path, "expected an object");
        continue;
      }
      rules::SpotRecord rec;
      rec.id = normalize_term(get_string(s, "id", path, out).value_or(""));
      rec.name = get_string(s, "name", path, out).value_or(rec.id);
      rec.area = s.contains("area") && s["area"].is_string() ? s["area"].get<std::string>() : "";
      rec.nearby = get_strings(s, "nearby", path, out);
      const std::string who = "spot '" + rec.id + "'";
      if (!s.contains("impression") || !s["impression"].is_array()) {
        issue(out, path + "/impression", "expected an array for " + who);
      } else if (s["impression"].size() != egc::kEmotionCount) {
        issue(out, path + "/impression",
              "impression of " + who + " has " + std::to_string(s["impression"].size()) + " values, expected 20");
      } else {
        for (std::size_t k = 0; k < egc::kEmotionCount; ++k) {
          const auto& x = s["impression"][k];
          if (!x.is_number() || !is_unit(x.get<double>()))
            issue(out, path + "/impression/" + std::to_string(k), "impression value of " + who + " outside [0,1]");
          else rec.impression[k] = x.get<double>();
        }
      }
      c.spots.push_back(std::move(rec));
    }
  }
  for (const char* kind : {"foods", "gifts"}) {
    auto& dest = std::string_view(kind) == "foods" ? c.foods : c.gifts;
    if (!j.contains(kind)) continue;
    if (!j[kind].is_array()) {
      issue(out, std::string("/") + kind, "expected an array");
      continue;
    }
    for (std::size_t i = 0; i < j[kind].size(); ++i) {
      const auto& s = j[kind][i];
      const std::string path = std::string("/") + kind + "/" + std::to_string(i);
      if (!s.is_object()) {
        issue(out, path, "expected an object");
        continue;
      }
      rules::ItemRecord rec;
      rec.id = normalize_term(get_string(s, "id", path, out).value_or(""));
      rec.name = get_string(s, "name", path, out).value_or(rec.id);
      rec.fv_term = normalize_term(get_string(s, "fv_term", path, out).value_or(rec.id));
      rec.nearby = get_strings(s, "nearby", path, out);
      dest.push_back(std::move(rec));
    }
  }

  std::set<std::string> ids;
  auto check_id = [&](const std::string& id, const std::string& path) {
    if (id.empty()) issue(out, path + "/id", "empty id");
    else if (!ids.insert(id).second) issue(out, path + "/id", "duplicate id '" + id + "'");
  };
  for (std::size_t i = 0; i < c.spots.size(); ++i) check_id(c.spots[i].id, "/spots/" + std::to_string(i));
  for (std::size_t i = 0; i < c.foods.size(); ++i) check_id(c.foods[i].id, "/foods/" + std::to_string(i));
  for (std::size_t i = 0; i < c.gifts.size(); ++i) check_id(c.gifts[i].id, "/gifts/" + std::to_string(i));

  if (c.spots.empty()) issue(out, "/spots", "catalog needs at least one spot");
  auto check_nearby = [&](const std::vector<std::string>& nearby, const std::string& path) {
    for (std::size_t k = 0; k < nearby.size(); ++k)
      if (c.find_spot(nearby[k]) == nullptr)
        issue(out, path + "/nearby/" + std::to_string(k), "unknown spot id '" + nearby[k] + "'");
  };
  for (std::size_t i = 0; i < c.spots.size(); ++i) check_nearby(c.spots[i].nearby, "/spots/" + std::to_string(i));
  for (std::size_t i = 0; i < c.foods.size(); ++i) check_nearby(c.foods[i].nearby, "/foods/" + std::to_string(i));
  for (std::size_t i = 0; i < c.gifts.size(); ++i) check_nearby(c.gifts[i].nearby, "/gifts/" + std::to_string(i));
  return c;
}

parse::Lexicon lexicon_from_json(const Json& j) {
  auto fail = [](const std::string& path, const std::string& msg) {
    throw Error(ErrorCode::kValidation, msg + " at " + path, path);
  };
  if (!j.is_object()) fail("/", "expected an object");
  std::vector<parse::VerbEntry> verbs;
  std::vector<parse::NounEntry> nouns;
  std::set<std::string> stopwords;
  if (!j.contains("verbs") || !j["verbs"].is_array()) fail("/verbs", "expected an array");
  for (std::size_t i = 0; i < j["verbs"].size(); ++i) {
    const auto& v = j["verbs"][i];
    const std::string path = "/verbs/" + std::to_string(i);
    if (!v.is_object() || !v.contains("lemma") || !v["lemma"].is_string()) fail(path + "/lemma", "expected a string");
    parse::VerbEntry e;
    e.lemma = v["lemma"].get<std::string>();
    if (v.contains("synonyms")) {
      if (!v["synonyms"].is_array()) fail(path + "/synonyms", "expected an array");
      for (std::size_t k = 0; k < v["synonyms"].size(); ++k) {
        if (!v["synonyms"][k].is_string()) fail(path + "/synonyms/" + std::to_string(k), "expected a string");
        e.synonyms.push_back(v["synonyms"][k].get<std::string>());
      }
    }
    const auto route = v.contains("case") && v["case"].is_string()
                           ? parse::parse_case_route(v["case"].get<std::string>())
                           : std::nullopt;
    if (!route) fail(path + "/case", "expected CASE1, CASE2 or CASE3");
    e.route = *route;
    const auto type = v.contains("event_type") && v["event_type"].is_string()
                          ? egc::parse_event_type(v["event_type"].get<std::string>())
                          : std::nullopt;
    if (!type) fail(path + "/event_type", "unknown event type");
    e.event_type = *type;
    verbs.push_back(std::move(e));
  }
  if (j.contains("nouns")) {
    if (!j["nouns"].is_array()) fail("/nouns", "expected an array");
    for (std::size_t i = 0; i < j["nouns"].size(); ++i) {
      const auto& n = j["nouns"][i];
      const std::string path = "/nouns/" + std::to_string(i);
      if (!n.is_object() || !n.contains("term") || !n["term"].is_string()) fail(path + "/term", "expected a string");
      const auto cat = n.contains("category") && n["category"].is_string()
                           ? parse::parse_category(n["category"].get<std::string>())
                           : std::nullopt;
      if (!cat || *cat == parse::Category::kNone) fail(path + "/category", "expected Spot, Food, Gift or Other");
      nouns.push_back({n["term"].get<std::string>(), *cat});
    }
  }
  if (j.contains("stopwords")) {
    if (!j["stopwords"].is_array()) fail("/stopwords", "expected an array");
    for (std::size_t i = 0; i < j["stopwords"].size(); ++i) {
      if (!j["stopwords"][i].is_string()) fail("/stopwords/" + std::to_string(i), "expected a string");
      stopwords.insert(j["stopwords"][i].get<std::string>());
    }
  }
  return parse::Lexicon(std::move(verbs), std::move(nouns), std::move(stopwords));
}

egc::FVDatabase fv_from_json(const Json& j, Issues& out) {
  egc::FVDatabase db;
  if (!j.is_object()) {
    issue(out, "", "expected an object");
    return db;
  }
  auto value = [&](const Json& x, const std::string& path) -> std::optional<egc::FavoriteValue> {
    if (!x.is_number()) {
      issue(out, path, "expected a number");
      return std::nullopt;
    }
    const double v = x.get<double>();
    if (!(v >= -1.0 && v <= 1.0)) {
      issue(out, path, "favorite value " + format_number(v) + " outside [-1,1]");
      return std::nullopt;
    }
    return egc::FavoriteValue(v);
  };
  if (j.contains("initial")) {
    if (!j["initial"].is_object()) issue(out, "/initial", "expected an object");
    else
      for (const auto& [term, x] : j["initial"].items())
        if (auto fv = value(x, key_path("/initial", term))) db.set_initial(term, *fv);
  }
  if (j.contains("personal")) {
    if (!j["personal"].is_object()) issue(out, "/personal", "expected an object");
    else
      for (const auto& [person, terms] : j["personal"].items()) {
        const std::string path = key_path("/personal", person);
        if (!terms.is_object()) {
          issue(out, path, "expected an object");
          continue;
        }
        for (const auto& [term, x] : terms.items())
          if (auto fv = value(x, key_path(path, term))) db.set_personal(person, term, *fv);
      }
  }
  return db;
}

rules::MembershipConfig membership_from_json(const Json& j, Issues& out) {
  auto m = rules::MembershipConfig::defaults();
  if (!j.is_object()) {
    issue(out, "", "expected an object");
    return m;
  }
  const std::pair<const char*, rules::PiecewiseLinear*> fields[] = {
      {"av_high", &m.av_high},       {"fv_dislike", &m.fv_dislike},     {"fv_normal", &m.fv_normal},
      {"fv_like", &m.fv_like},       {"out_negative", &m.out_negative}, {"out_normal", &m.out_normal},
      {"out_positive", &m.out_positive},
  };
  for (const auto& [key, dest] : fields) {
    if (!j.contains(key)) continue;
    if (auto f = breakpoints(j[key], std::string("/") + key, out)) *dest = std::move(*f);
  }
  return m;
}

affect::MstnConfig mstn_from_json(const Json& j) {
  auto fail = [](const std::string& path, const std::string& msg) {
    throw Error(ErrorCode::kValidation, msg + " at " + path, path);
  };
  affect::MstnConfig cfg;
  if (!j.is_object()) fail("/", "expected an object");
  if (!j.contains("states") || !j["states"].is_array()) fail("/states", "expected an array");
  for (std::size_t i = 0; i < j["states"].size(); ++i) {
    if (!j["states"][i].is_string()) fail("/states/" + std::to_string(i), "expected a string");
    cfg.states.push_back(j["states"][i].get<std::string>());
  }
  if (j.contains("initial")) {
    if (!j["initial"].is_string()) fail("/initial", "expected a string");
    cfg.initial = j["initial"].get<std::string>();
  }
  if (!j.contains("weights") || !j["weights"].is_object()) fail("/weights", "expected an object");
  for (const auto& [from, rows] : j["weights"].items()) {
    const std::string p1 = key_path("/weights", from);
    if (!rows.is_object()) fail(p1, "expected an object");
    for (const auto& [trigger, row] : rows.items()) {
      const std::string p2 = key_path(p1, trigger);
      if (!row.is_object()) fail(p2, "expected an object");
      auto& dest = cfg.weights[from][trigger];
      for (const auto& [to, w] : row.items()) {
        if (!w.is_number()) fail(key_path(p2, to), "expected a number");
        dest[to] = w.get<double>();
      }
    }
  }
  affect::validate(cfg);
  return cfg;
}

rules::RulesConfig rules_from_json(const Json& j, Issues& out) {
  auto cfg = rules::RulesConfig::defaults();
  if (!j.is_object()) {
    issue(out, "", "expected an object");
    return cfg;
  }
  if (j.contains("cf")) {
    if (!j["cf"].is_object()) issue(out, "/cf", "expected an object");
    else
      for (const auto& [rule, x] : j["cf"].items()) {
        const std::string path = key_path("/cf", rule);
        if (!cfg.cf.contains(rule)) issue(out, path, "unknown rule id");
        else if (!x.is_number() || !is_unit(x.get<double>())) issue(out, path, "certainty factor outside [0,1]");
        else cfg.cf[rule] = x.get<double>();
      }
  }
  if (j.contains("dislike_threshold")) {
    const auto& x = j["dislike_threshold"];
    if (!x.is_number() || !(x.get<double>() >= -1.0 && x.get<double>() <= 1.0))
      issue(out, "/dislike_threshold", "expected a number in [-1,1]");
    else cfg.dislike_threshold = x.get<double>();
  }
  if (j.contains("few")) {
    if (!j["few"].is_number_unsigned() || j["few"].get<std::size_t>() == 0)
      issue(out, "/few", "expected a positive integer");
    else cfg.few = j["few"].get<std::size_t>();
  }
  if (j.contains("lambda")) {
    if (!j["lambda"].is_number() || !is_unit(j["lambda"].get<double>()))
      issue(out, "/lambda", "expected a number in [0,1]");
    else cfg.lambda = j["lambda"].get<double>();
  }
  return cfg;
}

CatalogBundle load_bundle(const fs::path& dir) { return load_bundle(BundlePaths::in(dir)); }

CatalogBundle load_bundle(const BundlePaths& paths) {
  std::vector<std::string> report;
  auto collect = [&](const fs::path& file, const Issues& issues) {
    for (const auto& line : issues) report.push_back(file.filename().string() + ": " + line);
  };
  auto read = [&](const fs::path& file) -> std::optional<Json> {
    try {
      return read_json_file(file);
    } catch (const Error& e) {
      report.push_back(file.filename().string() + ": " + e.what());
      return std::nullopt;
    }
  };
  // Decoders that throw on their first problem.
  auto guarded = [&](const fs::path& file, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      report.push_back(file.filename().string() + ": " + (e.detail().empty() ? "/" : e.detail()) + ": " + e.what());
    }
  };

  rules::Catalog catalog;
  std::optional<parse::Lexicon> lexicon;
  egc::FVDatabase fv;
  auto membership = rules::MembershipConfig::defaults();
  affect::MstnConfig mstn;
  auto rules_cfg = rules::RulesConfig::defaults();

  if (auto j = read(paths.catalog)) {
    Issues is;
    catalog = catalog_from_json(*j, is);
    collect(paths.catalog, is);
  }
  if (auto j = read(paths.lexicon)) guarded(paths.lexicon, [&] { lexicon = lexicon_from_json(*j); });
  if (auto j = read(paths.fv)) {
    Issues is;
    fv = fv_from_json(*j, is);
    collect(paths.fv, is);
  }
  if (auto j = read(paths.membership)) {
    Issues is;
    membership = membership_from_json(*j, is);
    collect(paths.membership, is);
  }
  if (auto j = read(paths.mstn)) guarded(paths.mstn, [&] { mstn = mstn_from_json(*j); });
  if (auto j = read(paths.rules_cf)) {
    Issues is;
    rules_cfg = rules_from_json(*j, is);
    collect(paths.rules_cf, is);
  }

  std::vector<std::string> warnings;
  if (lexicon) {
    for (std::size_t i = 0; i < lexicon->nouns().size(); ++i) {
      const auto& n = lexicon->nouns()[i];
      if (n.category == parse::Category::kSpot && catalog.find_spot(n.term) == nullptr && !catalog.spots.empty())
        report.push_back(paths.lexicon.filename().string() + ": /nouns/" + std::to_string(i) + ": spot noun '" +
                         n.term + "' has no catalog entry");
    }
  }
  auto check_term = [&](const rules::ItemRecord& item) {
    if (fv.lookup(item.fv_term).unknown())
      warnings.push_back("fv_term '" + item.fv_term + "' of '" + item.id + "' has no favorite value");
  };
  for (const auto& f : catalog.foods) check_term(f);
  for (const auto& g : catalog.gifts) check_term(g);

  if (!report.empty()) {
    std::string message = "invalid data bundle:";
    for (const auto& line : report) message += "\n  " + line;
    throw Error(ErrorCode::kValidation, message, report.front());
  }
  return {std::move(catalog), std::move(*lexicon), std::move(fv), std::move(membership),
          std::move(mstn), std::move(rules_cfg), std::move(warnings)};
}

Json to_json(const egc::EmotionResult& e) {
  Json j;
  j["emotion"] = e.emotion ? Json(std::string(egc::to_string(*e.emotion))) : Json(nullptr);
  j["valence"] = std::string(egc::to_string(e.valence));
  j["intensity"] = e.intensity;
  return j;
}

egc::EmotionResult emotion_result_from_json(const Json& j) {
  egc::EmotionResult e;
  if (!j.at("emotion").is_null()) {
    auto t = egc::parse_emotion(j.at("emotion").get<std::string>());
    if (!t) integrity("unknown emotion " + j.at("emotion").dump());
    e.emotion = *t;
  }
  auto v = egc::parse_valence(j.at("valence").get<std::string>());
  if (!v) integrity("unknown valence " + j.at("valence").dump());
  e.valence = *v;
  e.intensity = j.at("intensity").get<double>();
  return e;
}

Json to_json(const egc::Vector20& v) { return Json(std::vector<double>(v.begin(), v.end())); }

egc::Vector20 vector20_from_json(const Json& j) {
  const auto xs = j.get<std::vector<double>>();
  if (xs.size() != egc::kEmotionCount) integrity("expected 20 values");
  egc::Vector20 v{};
  std::copy(xs.begin(), xs.end(), v.begin());
  return v;
}

Json to_json(const rules::Recommendation& r) {
  return Json{{"kind", std::string(rules::to_string(r.kind))},
              {"id", r.id},
              {"name", r.name},
              {"strength", r.strength},
              {"fired_rules", r.fired_rules},
              {"rationale", r.rationale},
              {"nearby", r.nearby}};
}

rules::Recommendation recommendation_from_json(const Json& j) {
  rules::Recommendation r;
  auto kind = rules::parse_item_kind(j.at("kind").get<std::string>());
  if (!kind) integrity("unknown item kind " + j.at("kind").dump());
  r.kind = *kind;
  r.id = j.at("id").get<std::string>();
  r.name = j.at("name").get<std::string>();
  r.strength = j.at("strength").get<double>();
  r.fired_rules = j.at("fired_rules").get<std::vector<std::string>>();
  r.rationale = j.at("rationale").get<std::string>();
  r.nearby = j.at("nearby").get<std::vector<std::string>>();
  return r;
}

Json to_json(const TurnRecord& t) {
  Json recs = Json::array();
  for (const auto& r : t.recommendations) recs.push_back(to_json(r));
  return Json{{"utterance", t.utterance},
              {"route", std::string(parse::to_string(t.route))},
              {"emotion", to_json(t.emotion)},
              {"mood", t.mood},
              {"recommendations", recs},
              {"fired_rules", t.fired_rules},
              {"directive", t.directive}};
}

TurnRecord turn_from_json(const Json& j) {
  TurnRecord t;
  t.utterance = j.at("utterance").get<std::string>();
  auto route = parse::parse_case_route(j.at("route").get<std::string>());
  if (!route) integrity("unknown route " + j.at("route").dump());
  t.route = *route;
  t.emotion = emotion_result_from_json(j.at("emotion"));
  t.mood = j.at("mood").get<std::string>();
  for (const auto& r : j.at("recommendations")) t.recommendations.push_back(recommendation_from_json(r));
  t.fired_rules = j.at("fired_rules").get<std::vector<std::string>>();
  t.directive = j.at("directive").get<std::string>();
  return t;
}

Json to_json(const SessionState& s) {
  Json history = Json::array();
  for (const auto& t : s.history) history.push_back(to_json(t));
  return Json{{"session_id", s.id},
              {"person_id", s.person ? Json(*s.person) : Json(nullptr)},
              {"profile", to_json(s.profile.vector)},
              {"rho", s.profile.rho},
              {"mood", s.mood.id},
              {"taboo", std::vector<std::string>(s.taboo.begin(), s.taboo.end())},
              {"history", history}};
}

SessionState session_from_json(const Json& j) {
  SessionState s;
  s.id = j.at("session_id").get<std::string>();
  if (!j.at("person_id").is_null()) s.person = j.at("person_id").get<std::string>();
  s.profile.vector = vector20_from_json(j.at("profile"));
  s.profile.rho = j.at("rho").get<double>();
  for (double x : s.profile.vector)
    if (!is_unit(x)) integrity("profile component outside [0,1]");
  if (!(s.profile.rho >= 0.0 && s.profile.rho < 1.0)) integrity("rho outside [0,1)");
  s.mood.id = j.at("mood").get<std::string>();
  for (const auto& t : j.at("taboo")) s.taboo.insert(t.get<std::string>());
  for (const auto& t : j.at("history")) s.history.push_back(turn_from_json(t));
  return s;
}

Json to_json(const egc::SituationFlags& f) {
  return Json{{"target", kTargets.name(f.target)},       {"other_fortune", kFortunes.name(f.other_fortune)},
              {"prospect", kProspects.name(f.prospect)}, {"agent", kAgents.name(f.agent)},
              {"approval", kApprovals.name(f.approval)}};
}

egc::SituationFlags flags_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kValidation, "flags must be an object", "flags");
  egc::SituationFlags f;
  for (const auto& [key, value] : j.items()) {
    if (key == "target") f.target = kTargets.parse(value, "target");
    else if (key == "other_fortune") f.other_fortune = kFortunes.parse(value, "other_fortune");
    else if (key == "prospect") f.prospect = kProspects.parse(value, "prospect");
    else if (key == "agent") f.agent = kAgents.parse(value, "agent");
    else if (key == "approval") f.approval = kApprovals.parse(value, "approval");
    else throw Error(ErrorCode::kValidation, "unknown flag '" + key + "'", key);
  }
  return f;
}

bool valid_session_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '-'; });
}

SessionStore::SessionStore(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create session dir: " + ec.message(), dir_.string());
}

fs::path SessionStore::snapshot_path(const std::string& id) const { return dir_ / (id + ".json"); }
fs::path SessionStore::log_path(const std::string& id) const { return dir_ / (id + ".log.jsonl"); }

void SessionStore::save(const SessionState& state) {
  if (!valid_session_id(state.id)) throw Error(ErrorCode::kValidation, "invalid session id", state.id);

  std::size_t logged = 0;
  {
    std::ifstream in(log_path(state.id));
    for (std::string line; std::getline(in, line);)
      if (!line.empty()) ++logged;
  }
  if (logged < state.history.size()) {
    std::ofstream log(log_path(state.id), std::ios::app);
    if (!log) throw Error(ErrorCode::kIo, "cannot append session log", log_path(state.id).string());
    for (std::size_t i = logged; i < state.history.size(); ++i) log << to_json(state.history[i]).dump() << '\n';
  }

  const auto final_path = snapshot_path(state.id);
  auto tmp = final_path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write session snapshot", tmp.string());
    out << to_json(state).dump(2) << '\n';
    if (!out) throw Error(ErrorCode::kIo, "cannot write session snapshot", tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, final_path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot replace session snapshot: " + ec.message(), final_path.string());
}

SessionState SessionStore::load(const std::string& id) const {
  if (!exists(id)) throw Error(ErrorCode::kNotFound, "unknown session '" + id + "'", id);
  std::ifstream in(snapshot_path(id));
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    auto s = session_from_json(Json::parse(buf.str()));
    if (s.id != id) throw Error(ErrorCode::kValidation, "snapshot id does not match its file name");
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kIntegrity, "corrupted snapshot for session '" + id + "': " + e.what(),
                snapshot_path(id).string());
  } catch (const Error& e) {
    throw Error(ErrorCode::kIntegrity, "corrupted snapshot for session '" + id + "': " + e.what(),
                snapshot_path(id).string());
  }
}

bool SessionStore::exists(const std::string& id) const {
  return valid_session_id(id) && fs::is_regular_file(snapshot_path(id));
}

std::vector<std::string> SessionStore::list() const {
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const auto name = entry.path().filename().string();
    if (!entry.is_regular_file() || name.size() <= 5 || !name.ends_with(".json")) continue;
    const auto id = name.substr(0, name.size() - 5);
    if (valid_session_id(id)) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

void SessionStore::remove(const std::string& id) {
  if (!exists(id)) throw Error(ErrorCode::kNotFound, "unknown session '" + id + "'", id);
  std::error_code ec;
  fs::remove(snapshot_path(id), ec);
  fs::remove(log_path(id), ec);
}

std::string SessionStore::new_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  for (;;) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(rng()));
    std::string id(buf);
    std::lock_guard lock(registry_mutex_);
    if (!exists(id) && !locks_.contains(id)) {
      locks_.emplace(id, std::make_unique<std::mutex>());
      return id;
    }
  }
}

std::mutex& SessionStore::mutex_for(const std::string& id) {
  std::lock_guard lock(registry_mutex_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

}  // namespace concierge::store
