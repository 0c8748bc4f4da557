#include "concierge/emotion_state.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "concierge/error.hpp"
#include "concierge/text.hpp"

namespace concierge::affect {

EmotionProfile update_profile(const EmotionProfile& profile, const egc::Vector20& v) {
  if (!(profile.rho >= 0.0 && profile.rho < 1.0))
    throw Error(ErrorCode::kValidation, "decay rho " + format_number(profile.rho) + " outside [0,1)");
  EmotionProfile next = profile;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0 && v[i] <= 1.0))
      throw Error(ErrorCode::kValidation, "emotion vector component outside [0,1]", std::to_string(i));
    next.vector[i] = std::clamp(profile.rho * profile.vector[i] + (1.0 - profile.rho) * v[i], 0.0, 1.0);
  }
  return next;
}

void validate(const MstnConfig& cfg) {
  auto fail = [](const std::string& msg, const std::string& path) {
    throw Error(ErrorCode::kValidation, msg + " at " + path, path);
  };
  if (cfg.states.empty()) fail("no mental states configured", "/states");
  std::set<std::string> states;
  for (std::size_t i = 0; i < cfg.states.size(); ++i) {
    if (cfg.states[i].empty()) fail("empty state id", "/states/" + std::to_string(i));
    if (!states.insert(cfg.states[i]).second) fail("duplicate state '" + cfg.states[i] + "'", "/states/" + std::to_string(i));
  }
  if (!states.contains(cfg.initial)) fail("initial state '" + cfg.initial + "' is not configured", "/initial");
  for (const auto& [from, rows] : cfg.weights) {
    if (!states.contains(from)) fail("unknown state '" + from + "'", "/weights/" + from);
    for (const auto& [trigger, row] : rows) {
      const std::string path = "/weights/" + from + "/" + trigger;
      bool any_positive = false;
      for (const auto& [to, w] : row) {
        if (!states.contains(to)) fail("unknown next state '" + to + "'", path + "/" + to);
        if (!std::isfinite(w) || w < 0.0) fail("weight must be finite and non-negative", path + "/" + to);
        any_positive = any_positive || w > 0.0;
      }
      if (!any_positive) fail("trigger row has no positive weight", path);
    }
  }
}

MstnConfig default_mstn() {
  MstnConfig cfg;
  cfg.states = {"angry", "anxious", "happy", "neutral", "sad"};
  cfg.initial = "neutral";
  for (const auto& s : cfg.states) {
    auto& rows = cfg.weights[s];
    rows["+"] = {{"happy", 0.6}, {"neutral", 0.4}};
    rows["-"] = {{"sad", 0.6}, {"neutral", 0.4}};
    rows["Well-Being-"] = {{"sad", 1.0}};
    rows["Prospect-based-"] = {{"anxious", 1.0}};
    rows["Well-Being/Attribution-"] = {{"angry", 1.0}};
  }
  return cfg;
}

std::string group_trigger(egc::EmotionType e, egc::Valence v) {
  return std::string(egc::to_string(egc::group_of(e))) + valence_trigger(v);
}

std::string valence_trigger(egc::Valence v) {
  switch (v) {
    case egc::Valence::kPleasure:
      return "+";
    case egc::Valence::kDispleasure:
      return "-";
    case egc::Valence::kNeutral:
      break;
  }
  return {};
}

MoodUpdate update_mood(const MentalState& current, const egc::EmotionResult& e, const MstnConfig& cfg,
                       std::mt19937_64* rng) {
  if (std::find(cfg.states.begin(), cfg.states.end(), current.id) == cfg.states.end())
    throw Error(ErrorCode::kValidation, "mental state '" + current.id + "' is not configured");
  if (e.valence == egc::Valence::kNeutral || !e.emotion) return {current, {}, false};

  const auto rows = cfg.weights.find(current.id);
  const std::map<std::string, double>* row = nullptr;
  std::string trigger;
  if (rows != cfg.weights.end()) {
    for (const auto& key : {group_trigger(*e.emotion, e.valence), valence_trigger(e.valence)}) {
      if (auto it = rows->second.find(key); it != rows->second.end()) {
        row = &it->second;
        trigger = key;
        break;
      }
    }
  }
  if (row == nullptr) return {current, {}, true};

  if (rng == nullptr) {
    // std::map iterates in id order, so the first maximum wins ties.
    const std::string* best = nullptr;
    double best_w = -1.0;
    for (const auto& [to, w] : *row) {
      if (w > best_w) {
        best = &to;
        best_w = w;
      }
    }
    return {{*best}, trigger, false};
  }

  std::vector<std::string> ids;
  std::vector<double> weights;
  for (const auto& [to, w] : *row) {
    ids.push_back(to);
    weights.push_back(w);
  }
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  return {{ids[pick(*rng)]}, trigger, false};
}

bool is_negative(const egc::EmotionResult& e) { return e.valence == egc::Valence::kDispleasure; }

double positivity(const egc::Vector20& v) {
  double sum = 0.0;
  for (auto e : egc::all_emotions()) {
    const double x = v[static_cast<std::size_t>(e)];
    sum += egc::is_negative_type(e) ? -x : x;
  }
  return sum;
}

bool is_negative(const egc::Vector20& profile) { return positivity(profile) < 0.0; }

}  // namespace concierge::affect
