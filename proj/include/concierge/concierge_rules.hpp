#pragma once

// Tourist-concierge rule base: membership functions, agreement value,
// Rules 1-8 with the RC1-RC3 case bridges, taboo handling and ranking.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "concierge/caseframe_parser.hpp"
#include "concierge/egc.hpp"
#include "concierge/fpn.hpp"

namespace concierge::rules {

/// Breakpoint list (x ascending). Values hold constant beyond either end.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  explicit PiecewiseLinear(std::vector<std::pair<double, double>> points);

  double operator()(double x) const;
  const std::vector<std::pair<double, double>>& points() const { return points_; }

  bool operator==(const PiecewiseLinear&) const = default;

 private:
  std::vector<std::pair<double, double>> points_;
};

struct MembershipConfig {
  PiecewiseLinear av_high;
  PiecewiseLinear fv_dislike;
  PiecewiseLinear fv_normal;
  PiecewiseLinear fv_like;
  PiecewiseLinear out_negative;
  PiecewiseLinear out_normal;
  PiecewiseLinear out_positive;

  static MembershipConfig defaults();
  bool operator==(const MembershipConfig&) const = default;
};

struct FvMembership {
  double dislike = 0.0;
  double normal = 0.0;
  double like = 0.0;
};

double fuzzify_av(double av, const MembershipConfig& m);
FvMembership fuzzify_fv(double fv, const MembershipConfig& m);

inline constexpr std::size_t kDefuzzGrid = 101;

struct Defuzzified {
  double strength = 0.5;
  bool degenerate = false;  // every clipped set was empty
};

/// Centroid of max(min(neg, out_negative), min(norm, out_normal),
/// min(pos, out_positive)) sampled at x = k/100.
Defuzzified defuzzify(double neg, double norm, double pos, const MembershipConfig& m);

/// 1 - mean |a_i - b_i|.
double agreement_value(std::span<const double> profile, std::span<const double> impression);

enum class ItemKind { kSpot, kFood, kGift };
std::string_view to_string(ItemKind k);
std::optional<ItemKind> parse_item_kind(std::string_view text);

struct SpotRecord {
  std::string id;
  std::string name;
  egc::Vector20 impression{};
  std::string area;
  std::vector<std::string> nearby;

  bool operator==(const SpotRecord&) const = default;
};

/// Food or gift entry; `fv_term` keys into the FV database.
struct ItemRecord {
  std::string id;
  std::string name;
  std::string fv_term;
  std::vector<std::string> nearby;

  bool operator==(const ItemRecord&) const = default;
};

struct Catalog {
  std::vector<SpotRecord> spots;
  std::vector<ItemRecord> foods;
  std::vector<ItemRecord> gifts;

  const SpotRecord* find_spot(std::string_view id) const;
  /// Food or gift whose id or fv_term equals `term`.
  std::optional<std::pair<ItemKind, const ItemRecord*>> find_item(std::string_view term) const;
  bool operator==(const Catalog&) const = default;
};

using TabooList = std::set<std::string>;

struct RulesConfig {
  std::map<std::string, double> cf;
  double dislike_threshold = -0.3;
  std::size_t few = 3;
  double lambda = 0.1;

  double cf_of(const std::string& rule) const;
  static RulesConfig defaults();
  bool operator==(const RulesConfig&) const = default;
};

struct Recommendation {
  ItemKind kind = ItemKind::kSpot;
  std::string id;
  std::string name;
  double strength = 0.0;
  std::vector<std::string> fired_rules;
  std::string rationale;
  std::vector<std::string> nearby;

  bool operator==(const Recommendation&) const = default;
};

/// Rule 1-8 a (route, object category, valence) triple enters first.
std::string route_rule(parse::CaseRoute route, parse::Category category, egc::Valence valence);

struct TurnInput {
  const parse::ParsedUtterance& parsed;
  const egc::EmotionResult& emotion;
  const egc::Vector20& profile;
  const egc::FVDatabase& db;
  std::optional<std::string> person;
  const Catalog& catalog;
  const TabooList& taboo;
};

struct Decision {
  std::string entry_rule;
  std::vector<std::string> fired_rules;  // entry rule plus any bridges taken
  std::vector<Recommendation> recommendations;
  std::string directive;
  TabooList taboo;                       // after this turn
  std::vector<std::string> captured;     // terms added to the taboo list
  std::vector<std::string> diagnostics;
};

Decision select_spots_case1(const TurnInput& in, const MembershipConfig& m, const RulesConfig& cfg);
Decision select_food_gift_case2(const TurnInput& in, const MembershipConfig& m, const RulesConfig& cfg);
Decision handle_talk_case3(const TurnInput& in, const MembershipConfig& m, const RulesConfig& cfg);

/// Dispatches on the parsed route.
Decision decide(const TurnInput& in, const MembershipConfig& m, const RulesConfig& cfg);

/// Drops recommendations whose id, name, a word of the name, or fv_term is
/// taboo. Nearby lists lose taboo spot ids as well.
std::vector<Recommendation> filter_taboo(std::vector<Recommendation> recs, const TabooList& taboo,
                                         const Catalog& catalog);

/// The compiled rule net plus a map from transition id to rule label
/// (R1..R8, RC1..RC3; gates and direct case entries carry no label).
struct ConciergeNet {
  fpn::FuzzyPetriNet net;
  std::map<std::string, std::string> rule_of;
};

ConciergeNet compile_concierge_net(const RulesConfig& cfg = RulesConfig::defaults());

/// Initial marking for one turn: crisp verb-case, object-category and emotion
/// sign evidence; av-high and fv-positive from the membership functions.
fpn::Marking turn_evidence(const TurnInput& in, const MembershipConfig& m);

struct NetOutcome {
  fpn::RunResult run;
  std::vector<std::string> fired_rules;  // labels in first-firing order, no repeats
};

NetOutcome run_concierge_net(const ConciergeNet& cn, const fpn::Marking& evidence, double lambda);

}  // namespace concierge::rules
