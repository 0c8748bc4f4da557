#include "concierge/egc.hpp"

#include <algorithm>
#include <cmath>

#include "concierge/error.hpp"
#include "concierge/text.hpp"

namespace concierge::egc {

FavoriteValue::FavoriteValue(double value) : value_(value) {
  if (!std::isfinite(value) || value < -1.0 || value > 1.0)
    throw Error(ErrorCode::kValidation, "favorite value " + format_number(value) + " outside [-1,1]");
}

void FVDatabase::set_initial(std::string_view term, FavoriteValue fv) {
  initial_[normalize_term(term)] = fv.value();
}

void FVDatabase::set_personal(std::string_view person, std::string_view term, FavoriteValue fv) {
  personal_[std::string(person)][normalize_term(term)] = fv.value();
}

FvLookup FVDatabase::lookup(std::string_view term, const std::optional<std::string>& person) const {
  const std::string key = normalize_term(term);
  if (person) {
    if (auto p = personal_.find(*person); p != personal_.end()) {
      if (auto it = p->second.find(key); it != p->second.end()) return {it->second, FvSource::kPersonal};
    }
  }
  if (auto it = initial_.find(key); it != initial_.end()) return {it->second, FvSource::kInitial};
  return {0.0, FvSource::kUnknown};
}

namespace {

struct EventTypeName {
  EventType type;
  std::string_view name;
};

constexpr std::array<EventTypeName, kEventTypeCount> kEventNames{{
    {EventType::kVS, "V(S)"},
    {EventType::kASC, "A(S,C)"},
    {EventType::kASOFC, "A(S,OF,C)"},
    {EventType::kASOTC, "A(S,OT,C)"},
    {EventType::kASOMC, "A(S,OM,C)"},
    {EventType::kASOSC, "A(S,OS,C)"},
    {EventType::kVSOF, "V(S,OF)"},
    {EventType::kVSOT, "V(S,OT)"},
    {EventType::kVSOM, "V(S,OM)"},
    {EventType::kVSOS, "V(S,OS)"},
    {EventType::kVSO, "V(S,O)"},
    {EventType::kVSOOF, "V(S,O,OF)"},
    {EventType::kVSOOT, "V(S,O,OT)"},
    {EventType::kVSOOM, "V(S,O,OM)"},
    {EventType::kVSOI, "V(S,O,I)"},
    {EventType::kVSOOC, "V(S,O,OC)"},
    {EventType::kASOC, "A(S,O,C)"},
}};

constexpr std::array<std::string_view, 9> kDeepCaseNames{
    "subject",       "object",         "object_from", "object_to", "object_mutual",
    "object_source", "object_content", "instrument",  "predicate",
};

constexpr std::array<std::string_view, kEmotionCount> kEmotionNames{
    "joy",       "distress",      "happy-for",       "gloating",       "resentment",
    "sorry-for", "hope",          "fear",            "satisfaction",   "relief",
    "fears-confirmed", "disappointment", "pride",    "admiration",     "shame",
    "disliking", "gratitude",     "anger",           "gratification",  "remorse",
};

std::string_view strip_spaces(std::string_view s, std::string& buffer) {
  buffer.clear();
  for (char c : s)
    if (c != ' ') buffer += c;
  return buffer;
}

}  // namespace

const std::array<EventType, kEventTypeCount>& all_event_types() {
  static const auto types = [] {
    std::array<EventType, kEventTypeCount> out{};
    for (std::size_t i = 0; i < kEventTypeCount; ++i) out[i] = kEventNames[i].type;
    return out;
  }();
  return types;
}

std::string_view to_string(EventType type) {
  for (const auto& e : kEventNames)
    if (e.type == type) return e.name;
  return "?";
}

std::optional<EventType> parse_event_type(std::string_view text) {
  std::string buffer;
  const auto compact = strip_spaces(text, buffer);
  for (const auto& e : kEventNames)
    if (e.name == compact) return e.type;
  return std::nullopt;
}

std::string_view to_string(DeepCase slot) { return kDeepCaseNames[static_cast<std::size_t>(slot)]; }

std::optional<DeepCase> parse_deep_case(std::string_view text) {
  for (std::size_t i = 0; i < kDeepCaseNames.size(); ++i)
    if (kDeepCaseNames[i] == text) return static_cast<DeepCase>(i);
  return std::nullopt;
}

std::vector<DeepCase> required_slots(EventType type) {
  using D = DeepCase;
  std::vector<D> slots{D::kSubject};
  switch (type) {
    case EventType::kVS:
    case EventType::kASC:
      break;
    case EventType::kASOFC:
    case EventType::kVSOF:
      slots.push_back(D::kObjectFrom);
      break;
    case EventType::kASOTC:
    case EventType::kVSOT:
      slots.push_back(D::kObjectTo);
      break;
    case EventType::kASOMC:
    case EventType::kVSOM:
      slots.push_back(D::kObjectMutual);
      break;
    case EventType::kASOSC:
    case EventType::kVSOS:
      slots.push_back(D::kObjectSource);
      break;
    case EventType::kVSO:
    case EventType::kASOC:
      slots.push_back(D::kObject);
      break;
    case EventType::kVSOOF:
      slots.insert(slots.end(), {D::kObject, D::kObjectFrom});
      break;
    case EventType::kVSOOT:
      slots.insert(slots.end(), {D::kObject, D::kObjectTo});
      break;
    case EventType::kVSOOM:
      slots.insert(slots.end(), {D::kObject, D::kObjectMutual});
      break;
    case EventType::kVSOI:
      slots.insert(slots.end(), {D::kObject, D::kInstrument});
      break;
    case EventType::kVSOOC:
      slots.insert(slots.end(), {D::kObject, D::kObjectContent});
      break;
  }
  slots.push_back(D::kPredicate);
  return slots;
}

std::optional<DeepCase> object_slot(EventType type) {
  const auto slots = required_slots(type);
  // Layout is subject, [cases...], predicate.
  if (slots.size() <= 2) return std::nullopt;
  return slots[1];
}

std::string_view to_string(Valence v) {
  switch (v) {
    case Valence::kPleasure:
      return "Pleasure";
    case Valence::kDispleasure:
      return "Displeasure";
    case Valence::kNeutral:
      return "Neutral";
  }
  return "?";
}

std::optional<Valence> parse_valence(std::string_view text) {
  for (auto v : {Valence::kPleasure, Valence::kDispleasure, Valence::kNeutral})
    if (to_string(v) == text) return v;
  return std::nullopt;
}

const std::array<EmotionType, kEmotionCount>& all_emotions() {
  static const auto all = [] {
    std::array<EmotionType, kEmotionCount> out{};
    for (std::size_t i = 0; i < kEmotionCount; ++i) out[i] = static_cast<EmotionType>(i);
    return out;
  }();
  return all;
}

std::string_view to_string(EmotionType e) { return kEmotionNames[static_cast<std::size_t>(e)]; }

std::optional<EmotionType> parse_emotion(std::string_view text) {
  for (std::size_t i = 0; i < kEmotionNames.size(); ++i)
    if (kEmotionNames[i] == text) return static_cast<EmotionType>(i);
  return std::nullopt;
}

EmotionGroup group_of(EmotionType e) {
  using E = EmotionType;
  switch (e) {
    case E::kJoy:
    case E::kDistress:
      return EmotionGroup::kWellBeing;
    case E::kHappyFor:
    case E::kGloating:
    case E::kResentment:
    case E::kSorryFor:
      return EmotionGroup::kFortunesOfOthers;
    case E::kHope:
    case E::kFear:
      return EmotionGroup::kProspectBased;
    case E::kSatisfaction:
    case E::kRelief:
    case E::kFearsConfirmed:
    case E::kDisappointment:
      return EmotionGroup::kConfirmation;
    case E::kPride:
    case E::kAdmiration:
    case E::kShame:
    case E::kDisliking:
      return EmotionGroup::kAttribution;
    case E::kGratitude:
    case E::kAnger:
    case E::kGratification:
    case E::kRemorse:
      return EmotionGroup::kWellBeingAttribution;
  }
  return EmotionGroup::kWellBeing;
}

std::string_view to_string(EmotionGroup g) {
  switch (g) {
    case EmotionGroup::kWellBeing:
      return "Well-Being";
    case EmotionGroup::kFortunesOfOthers:
      return "Fortunes-of-Others";
    case EmotionGroup::kProspectBased:
      return "Prospect-based";
    case EmotionGroup::kConfirmation:
      return "Confirmation";
    case EmotionGroup::kAttribution:
      return "Attribution";
    case EmotionGroup::kWellBeingAttribution:
      return "Well-Being/Attribution";
  }
  return "?";
}

bool is_negative_type(EmotionType e) {
  using E = EmotionType;
  switch (e) {
    case E::kDistress:
    case E::kResentment:
    case E::kSorryFor:
    case E::kFear:
    case E::kFearsConfirmed:
    case E::kDisappointment:
    case E::kShame:
    case E::kDisliking:
    case E::kAnger:
    case E::kRemorse:
      return true;
    default:
      return false;
  }
}

EmotionAxes assign_axes(const CaseFrame& frame, const FVDatabase& db,
                        const std::optional<std::string>& person, EgcDiagnostics* diagnostics) {
  for (DeepCase slot : required_slots(frame.event_type)) {
    auto it = frame.slots.find(slot);
    if (it == frame.slots.end() || normalize_term(it->second).empty())
      throw Error(ErrorCode::kValidation,
                  "event type " + std::string(to_string(frame.event_type)) + " requires slot '" +
                      std::string(to_string(slot)) + "'",
                  std::string(to_string(slot)));
  }

  // FV of a slot; a slot the frame does not fill contributes 0 (only the
  // optional half of the OT-OF difference can be absent here).
  auto fv = [&](DeepCase slot, bool* unknown = nullptr) {
    auto it = frame.slots.find(slot);
    if (it == frame.slots.end()) return 0.0;
    const auto found = db.lookup(it->second, person);
    if (found.unknown() && diagnostics != nullptr) diagnostics->unknown_terms.push_back(normalize_term(it->second));
    if (unknown != nullptr) *unknown = found.unknown();
    return found.value;
  };
  auto clamp = [](double v) { return std::clamp(v, -1.0, 1.0); };

  using D = DeepCase;
  const double f_p = fv(D::kPredicate);
  switch (frame.event_type) {
    case EventType::kVS:
    case EventType::kASC:
    case EventType::kASOFC:
    case EventType::kASOTC:
    case EventType::kASOMC:
    case EventType::kASOSC:
      return {fv(D::kSubject), kDummyFv, f_p};
    case EventType::kVSOF:
    case EventType::kVSOT:
      return {fv(D::kSubject), clamp(fv(D::kObjectTo) - fv(D::kObjectFrom)), f_p};
    case EventType::kVSOM:
      return {fv(D::kSubject), fv(D::kObjectMutual), f_p};
    case EventType::kVSOS:
      return {clamp(fv(D::kSubject) - fv(D::kObjectSource)), kDummyFv, f_p};
    case EventType::kVSO: {
      bool subject_unknown = false;
      const double f_s = fv(D::kSubject, &subject_unknown);
      if (subject_unknown) {
        if (diagnostics != nullptr) diagnostics->subject_fallback = true;
        return {fv(D::kObject), kDummyFv, f_p};
      }
      return {f_s, fv(D::kObject), f_p};
    }
    case EventType::kVSOOF:
    case EventType::kVSOOT:
      return {fv(D::kObject), clamp(fv(D::kObjectTo) - fv(D::kObjectFrom)), f_p};
    case EventType::kVSOOM:
      return {fv(D::kObject), fv(D::kObjectMutual), f_p};
    case EventType::kVSOI:
      return {fv(D::kObject), std::abs(fv(D::kInstrument)), f_p};
    case EventType::kVSOOC:
      return {fv(D::kObject), kDummyFv, fv(D::kObjectContent)};
    case EventType::kASOC:
      return {fv(D::kObject), kDummyFv, f_p};
  }
  return {};
}

Valence valence(const EmotionAxes& axes) {
  const double product = axes.f1 * axes.f2 * axes.f3;
  if (axes.f1 == 0.0 || axes.f2 == 0.0 || axes.f3 == 0.0) return Valence::kNeutral;
  return product > 0.0 ? Valence::kPleasure : Valence::kDispleasure;
}

double intensity(const EmotionAxes& axes) {
  return std::cbrt(std::abs(axes.f1) * std::abs(axes.f2) * std::abs(axes.f3));
}

std::optional<EmotionType> classify(Valence v, const SituationFlags& flags) {
  using E = EmotionType;
  if (v == Valence::kNeutral) return std::nullopt;
  const bool pleased = v == Valence::kPleasure;

  switch (flags.prospect) {
    case Prospect::kProspective:
      return pleased ? E::kHope : E::kFear;
    case Prospect::kConfirmed:
      return pleased ? E::kSatisfaction : E::kFearsConfirmed;
    case Prospect::kDisconfirmed:
      return pleased ? E::kRelief : E::kDisappointment;
    case Prospect::kNone:
      break;
  }

  if (flags.target == Target::kOther && flags.other_fortune != OtherFortune::kNone) {
    const bool desirable = flags.other_fortune == OtherFortune::kDesirable;
    if (desirable) return pleased ? E::kHappyFor : E::kResentment;
    return pleased ? E::kGloating : E::kSorryFor;
  }

  if (flags.agent != Agent::kNone && flags.approval != Approval::kNone) {
    if (flags.agent == Agent::kSelf) return pleased ? E::kGratification : E::kRemorse;
    return pleased ? E::kGratitude : E::kAnger;
  }

  if (flags.approval != Approval::kNone) {
    if (flags.target == Target::kSelf) return pleased ? E::kPride : E::kShame;
    return pleased ? E::kAdmiration : E::kDisliking;
  }

  return pleased ? E::kJoy : E::kDistress;
}

EmotionResult evaluate(const CaseFrame& frame, const SituationFlags& flags, const FVDatabase& db,
                       const std::optional<std::string>& person, EgcDiagnostics* diagnostics) {
  const EmotionAxes axes = assign_axes(frame, db, person, diagnostics);
  const Valence v = valence(axes);
  if (v == Valence::kNeutral) return {std::nullopt, Valence::kNeutral, 0.0};
  return {classify(v, flags), v, intensity(axes)};
}

Vector20 emotion_to_vector20(const EmotionResult& result) {
  Vector20 out{};
  if (result.emotion && result.valence != Valence::kNeutral)
    out[static_cast<std::size_t>(*result.emotion)] = result.intensity;
  return out;
}

}  // namespace concierge::egc
