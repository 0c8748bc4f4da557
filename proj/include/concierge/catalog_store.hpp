#pragma once

// Bundle loading/validation, JSON codecs and file-backed session storage.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "concierge/caseframe_parser.hpp"
#include "concierge/concierge_rules.hpp"
#include "concierge/egc.hpp"
#include "concierge/emotion_state.hpp"

namespace concierge::store {

using Json = nlohmann::json;

struct BundlePaths {
  std::filesystem::path catalog;
  std::filesystem::path lexicon;
  std::filesystem::path fv;
  std::filesystem::path membership;
  std::filesystem::path mstn;
  std::filesystem::path rules_cf;

  /// The standard file names inside `dir`.
  static BundlePaths in(const std::filesystem::path& dir);
};

struct CatalogBundle {
  rules::Catalog catalog;
  parse::Lexicon lexicon;
  egc::FVDatabase fv;
  rules::MembershipConfig membership;
  affect::MstnConfig mstn;
  rules::RulesConfig rules;
  std::vector<std::string> warnings;  // e.g. fv_terms with no favorite value
};

/// Parses and validates every file, then checks cross references. All
/// problems are collected; the thrown Error(kValidation) lists one per line
/// as "<file>: <json pointer>: <message>".
CatalogBundle load_bundle(const BundlePaths& paths);
CatalogBundle load_bundle(const std::filesystem::path& dir);

// Per-file decoders. Problems are appended to `issues` as "<pointer>: <message>".
rules::Catalog catalog_from_json(const Json& j, std::vector<std::string>& issues);
parse::Lexicon lexicon_from_json(const Json& j);
egc::FVDatabase fv_from_json(const Json& j, std::vector<std::string>& issues);
rules::MembershipConfig membership_from_json(const Json& j, std::vector<std::string>& issues);
affect::MstnConfig mstn_from_json(const Json& j);
rules::RulesConfig rules_from_json(const Json& j, std::vector<std::string>& issues);

struct TurnRecord {
  std::string utterance;
  parse::CaseRoute route = parse::CaseRoute::kCase3;
  egc::EmotionResult emotion;
  std::string mood;
  std::vector<rules::Recommendation> recommendations;
  std::vector<std::string> fired_rules;
  std::string directive;

  bool operator==(const TurnRecord&) const = default;
};

struct SessionState {
  std::string id;
  std::optional<std::string> person;
  affect::EmotionProfile profile;
  affect::MentalState mood{"neutral"};
  rules::TabooList taboo;
  std::vector<TurnRecord> history;

  bool operator==(const SessionState&) const = default;
};

Json to_json(const egc::EmotionResult& e);
egc::EmotionResult emotion_result_from_json(const Json& j);
Json to_json(const egc::Vector20& v);
egc::Vector20 vector20_from_json(const Json& j);
Json to_json(const rules::Recommendation& r);
rules::Recommendation recommendation_from_json(const Json& j);
Json to_json(const TurnRecord& t);
TurnRecord turn_from_json(const Json& j);
Json to_json(const SessionState& s);
SessionState session_from_json(const Json& j);
Json to_json(const egc::SituationFlags& f);
egc::SituationFlags flags_from_json(const Json& j);

/// sessions/<id>.json snapshots plus sessions/<id>.log.jsonl turn logs.
/// Snapshots are replaced atomically (temp file + rename).
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  /// Writes the snapshot and appends to the log any history entries it does
  /// not hold yet.
  void save(const SessionState& state);

  /// Error(kNotFound) for an unknown id, Error(kIntegrity) for a snapshot that
  /// does not decode. The log is never touched on load.
  SessionState load(const std::string& id) const;

  bool exists(const std::string& id) const;
  std::vector<std::string> list() const;
  void remove(const std::string& id);

  /// Random 16-hex-digit id not yet in use.
  std::string new_id();

  /// One mutex per session id, for serializing read-modify-write turns.
  std::mutex& mutex_for(const std::string& id);

  std::filesystem::path snapshot_path(const std::string& id) const;
  std::filesystem::path log_path(const std::string& id) const;

 private:
  std::filesystem::path dir_;
  std::mutex registry_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

/// Ids are limited to [A-Za-z0-9_-] so they can never escape the store dir.
bool valid_session_id(std::string_view id);

}  // namespace concierge::store
