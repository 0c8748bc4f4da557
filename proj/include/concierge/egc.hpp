#pragma once

// Emotion Generating Calculations: favorite values of the case elements are
// placed on three axes, the octant of the resulting vector gives
// pleasure/displeasure, and situation flags refine it into one of 20 types.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace concierge::egc {

/// Like/dislike strength of a term, in [-1, 1].
class FavoriteValue {
 public:
  explicit FavoriteValue(double value);
  double value() const { return value_; }

 private:
  double value_;
};

enum class FvSource { kPersonal, kInitial, kUnknown };

struct FvLookup {
  double value = 0.0;
  FvSource source = FvSource::kUnknown;

  bool unknown() const { return source == FvSource::kUnknown; }
};

/// Initial (shared) and personal favorite values. Terms are normalized on
/// insertion and lookup.
class FVDatabase {
 public:
  using TermMap = std::map<std::string, double, std::less<>>;

  void set_initial(std::string_view term, FavoriteValue fv);
  void set_personal(std::string_view person, std::string_view term, FavoriteValue fv);

  /// Personal value if present for `person`, else the initial value, else 0
  /// flagged as unknown.
  FvLookup lookup(std::string_view term, const std::optional<std::string>& person = std::nullopt) const;

  const TermMap& initial() const { return initial_; }
  const std::map<std::string, TermMap, std::less<>>& personal() const { return personal_; }

 private:
  TermMap initial_;
  std::map<std::string, TermMap, std::less<>> personal_;
};

enum class EventType {
  kVS,      // V(S)
  kASC,     // A(S,C)
  kASOFC,   // A(S,OF,C)
  kASOTC,   // A(S,OT,C)
  kASOMC,   // A(S,OM,C)
  kASOSC,   // A(S,OS,C)
  kVSOF,    // V(S,OF)
  kVSOT,    // V(S,OT)
  kVSOM,    // V(S,OM)
  kVSOS,    // V(S,OS)
  kVSO,     // V(S,O)
  kVSOOF,   // V(S,O,OF)
  kVSOOT,   // V(S,O,OT)
  kVSOOM,   // V(S,O,OM)
  kVSOI,    // V(S,O,I)
  kVSOOC,   // V(S,O,OC)
  kASOC,    // A(S,O,C)
};

inline constexpr std::size_t kEventTypeCount = 17;
const std::array<EventType, kEventTypeCount>& all_event_types();
std::string_view to_string(EventType type);
std::optional<EventType> parse_event_type(std::string_view text);

enum class DeepCase {
  kSubject,
  kObject,
  kObjectFrom,
  kObjectTo,
  kObjectMutual,
  kObjectSource,
  kObjectContent,
  kInstrument,
  kPredicate,
};

std::string_view to_string(DeepCase slot);
std::optional<DeepCase> parse_deep_case(std::string_view text);

/// Slots a frame of this type must fill: subject and predicate always, plus
/// the cases named in the type.
std::vector<DeepCase> required_slots(EventType type);

/// The case an utterance's main object noun goes into, if the type has one.
std::optional<DeepCase> object_slot(EventType type);

struct CaseFrame {
  EventType event_type = EventType::kVS;
  std::map<DeepCase, std::string> slots;

  bool operator==(const CaseFrame&) const = default;
};

struct EmotionAxes {
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;

  bool operator==(const EmotionAxes&) const = default;
};

enum class Valence { kPleasure, kDispleasure, kNeutral };
std::string_view to_string(Valence v);
std::optional<Valence> parse_valence(std::string_view text);

enum class Target { kSelf, kOther };
enum class OtherFortune { kNone, kDesirable, kUndesirable };
enum class Prospect { kNone, kProspective, kConfirmed, kDisconfirmed };
enum class Agent { kNone, kSelf, kOther };
enum class Approval { kNone, kApproved, kDisapproved };

struct SituationFlags {
  Target target = Target::kSelf;
  OtherFortune other_fortune = OtherFortune::kNone;
  Prospect prospect = Prospect::kNone;
  Agent agent = Agent::kNone;
  Approval approval = Approval::kNone;

  bool operator==(const SituationFlags&) const = default;
};

/// Fixed enumeration order; also the index order of 20-d emotion vectors.
enum class EmotionType {
  kJoy,
  kDistress,
  kHappyFor,
  kGloating,
  kResentment,
  kSorryFor,
  kHope,
  kFear,
  kSatisfaction,
  kRelief,
  kFearsConfirmed,
  kDisappointment,
  kPride,
  kAdmiration,
  kShame,
  kDisliking,
  kGratitude,
  kAnger,
  kGratification,
  kRemorse,
};

inline constexpr std::size_t kEmotionCount = 20;
const std::array<EmotionType, kEmotionCount>& all_emotions();
std::string_view to_string(EmotionType e);
std::optional<EmotionType> parse_emotion(std::string_view text);

enum class EmotionGroup {
  kWellBeing,
  kFortunesOfOthers,
  kProspectBased,
  kConfirmation,
  kAttribution,
  kWellBeingAttribution,
};

EmotionGroup group_of(EmotionType e);
std::string_view to_string(EmotionGroup g);

/// Fixed polarity of each type: distress, resentment, sorry-for, fear,
/// fears-confirmed, disappointment, shame, disliking, anger and remorse are
/// negative; the other ten are positive.
bool is_negative_type(EmotionType e);

struct EmotionResult {
  std::optional<EmotionType> emotion;
  Valence valence = Valence::kNeutral;
  double intensity = 0.0;

  bool operator==(const EmotionResult&) const = default;
};

using Vector20 = std::array<double, kEmotionCount>;

/// Filler for an axis that no case element maps to.
inline constexpr double kDummyFv = 0.5;

struct EgcDiagnostics {
  std::vector<std::string> unknown_terms;
  bool subject_fallback = false;
};

/// Throws Error(kValidation) naming the first missing required slot.
EmotionAxes assign_axes(const CaseFrame& frame, const FVDatabase& db,
                        const std::optional<std::string>& person = std::nullopt,
                        EgcDiagnostics* diagnostics = nullptr);

Valence valence(const EmotionAxes& axes);

/// Geometric mean of the axis magnitudes.
double intensity(const EmotionAxes& axes);

std::optional<EmotionType> classify(Valence v, const SituationFlags& flags);

EmotionResult evaluate(const CaseFrame& frame, const SituationFlags& flags, const FVDatabase& db,
                       const std::optional<std::string>& person = std::nullopt,
                       EgcDiagnostics* diagnostics = nullptr);

Vector20 emotion_to_vector20(const EmotionResult& result);

}  // namespace concierge::egc
