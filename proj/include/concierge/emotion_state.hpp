#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "concierge/egc.hpp"

namespace concierge::affect {

/// Session emotion accumulated as an exponential moving average.
struct EmotionProfile {
  egc::Vector20 vector{};
  double rho = 0.5;

  bool operator==(const EmotionProfile&) const = default;
};

/// rho * p + (1 - rho) * v, componentwise. Throws on rho outside [0,1) or
/// components of v outside [0,1].
EmotionProfile update_profile(const EmotionProfile& profile, const egc::Vector20& v);

struct MentalState {
  std::string id;

  bool operator==(const MentalState&) const = default;
};

/// weights[state][trigger][next] with triggers of the form "<Group>+",
/// "<Group>-" or the bare valence "+" / "-".
struct MstnConfig {
  std::vector<std::string> states;
  std::string initial = "neutral";
  std::map<std::string, std::map<std::string, std::map<std::string, double>>> weights;
};

/// Throws Error(kValidation) with a path into the config document.
void validate(const MstnConfig& cfg);

/// Five-state network used when no config file is given.
MstnConfig default_mstn();

std::string group_trigger(egc::EmotionType e, egc::Valence v);
std::string valence_trigger(egc::Valence v);

struct MoodUpdate {
  MentalState state;
  std::string trigger;  // empty when the emotion was neutral or no row matched
  bool missing_row = false;
};

/// Deterministic mode (rng == nullptr) takes the heaviest next state with ties
/// going to the lexicographically smallest id; with an rng the next state is
/// sampled in proportion to the weights.
MoodUpdate update_mood(const MentalState& current, const egc::EmotionResult& e, const MstnConfig& cfg,
                       std::mt19937_64* rng = nullptr);

bool is_negative(const egc::EmotionResult& e);

/// Negative-type mass strictly exceeds positive-type mass.
bool is_negative(const egc::Vector20& profile);

/// Signed mass of a 20-d vector under the fixed positive/negative partition.
double positivity(const egc::Vector20& v);

}  // namespace concierge::affect
