#include "concierge/concierge_rules.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "concierge/emotion_state.hpp"
#include "concierge/error.hpp"
#include "concierge/text.hpp"

namespace concierge::rules {

using parse::CaseRoute;
using parse::Category;

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorCode::kValidation, "membership function has no breakpoints");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto [x, y] = points_[i];
    if (!std::isfinite(x) || !(y >= 0.0 && y <= 1.0))
      throw Error(ErrorCode::kValidation, "breakpoint value outside [0,1]", "/" + std::to_string(i));
    if (i > 0 && !(x > points_[i - 1].first))
      throw Error(ErrorCode::kValidation, "breakpoints must be strictly ascending", "/" + std::to_string(i));
  }
}

double PiecewiseLinear::operator()(double x) const {
  if (points_.empty()) return 0.0;
  if (x <= points_.front().first) return points_.front().second;
  if (x >= points_.back().first) return points_.back().second;
  auto hi = std::upper_bound(points_.begin(), points_.end(), x,
                             [](double v, const auto& p) { return v < p.first; });
  auto lo = hi - 1;
  const double t = (x - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

MembershipConfig MembershipConfig::defaults() {
  MembershipConfig m;
  m.av_high = PiecewiseLinear({{0.0, 0.0}, {0.3, 0.0}, {0.7, 1.0}, {1.0, 1.0}});
  m.fv_dislike = PiecewiseLinear({{-1.0, 1.0}, {-0.2, 0.0}, {1.0, 0.0}});
  m.fv_normal = PiecewiseLinear({{-1.0, 0.0}, {-0.6, 0.0}, {0.0, 1.0}, {0.6, 0.0}, {1.0, 0.0}});
  m.fv_like = PiecewiseLinear({{-1.0, 0.0}, {0.2, 0.0}, {1.0, 1.0}});
  m.out_negative = PiecewiseLinear({{0.0, 0.75}, {0.1, 1.0}, {0.5, 0.0}, {1.0, 0.0}});
  m.out_normal = PiecewiseLinear({{0.0, 0.0}, {0.1, 0.0}, {0.5, 1.0}, {0.9, 0.0}, {1.0, 0.0}});
  m.out_positive = PiecewiseLinear({{0.0, 0.0}, {0.5, 0.0}, {0.9, 1.0}, {1.0, 0.75}});
  return m;
}

double fuzzify_av(double av, const MembershipConfig& m) { return std::clamp(m.av_high(av), 0.0, 1.0); }

FvMembership fuzzify_fv(double fv, const MembershipConfig& m) {
  return {std::clamp(m.fv_dislike(fv), 0.0, 1.0), std::clamp(m.fv_normal(fv), 0.0, 1.0),
          std::clamp(m.fv_like(fv), 0.0, 1.0)};
}

Defuzzified defuzzify(double neg, double norm, double pos, const MembershipConfig& m) {
  double mass = 0.0;
  double moment = 0.0;
  for (std::size_t k = 0; k < kDefuzzGrid; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(kDefuzzGrid - 1);
    const double mu = std::max({std::min(neg, m.out_negative(x)), std::min(norm, m.out_normal(x)),
                                std::min(pos, m.out_positive(x))});
    mass += mu;
    moment += mu * x;
  }
  if (mass <= 0.0) return {0.5, true};
  return {std::clamp(moment / mass, 0.0, 1.0), false};
}

double agreement_value(std::span<const double> profile, std::span<const double> impression) {
  if (profile.size() != impression.size() || profile.empty())
    throw Error(ErrorCode::kValidation, "agreement value needs two vectors of equal, non-zero length");
  double sum = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) sum += std::abs(profile[i] - impression[i]);
  return std::clamp(1.0 - sum / static_cast<double>(profile.size()), 0.0, 1.0);
}

std::string_view to_string(ItemKind k) {
  switch (k) {
    case ItemKind::kSpot:
      return "Spot";
    case ItemKind::kFood:
      return "Food";
    case ItemKind::kGift:
      return "Gift";
  }
  return "?";
}

std::optional<ItemKind> parse_item_kind(std::string_view text) {
  for (auto k : {ItemKind::kSpot, ItemKind::kFood, ItemKind::kGift})
    if (to_string(k) == text) return k;
  return std::nullopt;
}

const SpotRecord* Catalog::find_spot(std::string_view id) const {
  for (const auto& s : spots)
    if (s.id == id) return &s;
  return nullptr;
}

std::optional<std::pair<ItemKind, const ItemRecord*>> Catalog::find_item(std::string_view term) const {
  for (const auto& f : foods)
    if (f.id == term || f.fv_term == term) return std::make_pair(ItemKind::kFood, &f);
  for (const auto& g : gifts)
    if (g.id == term || g.fv_term == term) return std::make_pair(ItemKind::kGift, &g);
  return std::nullopt;
}

double RulesConfig::cf_of(const std::string& rule) const {
  auto it = cf.find(rule);
  if (it == cf.end()) throw Error(ErrorCode::kValidation, "no certainty factor for rule " + rule, rule);
  return it->second;
}

RulesConfig RulesConfig::defaults() {
  RulesConfig c;
  for (auto r : {"R1", "R2", "R3", "R4", "R5", "R6"}) c.cf[r] = 0.9;
  for (auto r : {"R7", "R8", "RC1", "RC2", "RC3"}) c.cf[r] = 0.8;
  return c;
}

std::string route_rule(CaseRoute route, Category category, egc::Valence valence) {
  const bool negative = valence == egc::Valence::kDispleasure;
  switch (route) {
    case CaseRoute::kCase1:
      switch (category) {
        case Category::kSpot:
          return negative ? "R2" : "R1";
        case Category::kFood:
        case Category::kGift:
          return "R3";
        case Category::kOther:
        case Category::kNone:
          return negative ? "R5" : "R4";
      }
      break;
    case CaseRoute::kCase2:
      return "R6";
    case CaseRoute::kCase3:
      return negative ? "R7" : "R8";
  }
  return "R8";
}

namespace {

std::string name_key(std::string_view name) {
  std::string key = normalize_term(name);
  std::replace(key.begin(), key.end(), ' ', '_');
  return key;
}

bool blocked(const TabooList& taboo, const std::string& id, const std::string& name, const std::string& fv_term) {
  if (taboo.empty()) return false;
  if (taboo.contains(id) || taboo.contains(name_key(name))) return true;
  if (!fv_term.empty() && taboo.contains(fv_term)) return true;
  std::istringstream words(normalize_term(name));
  for (std::string w; words >> w;)
    if (taboo.contains(w)) return true;
  return false;
}

bool spot_blocked(const TabooList& taboo, const SpotRecord& s) { return blocked(taboo, s.id, s.name, {}); }
bool item_blocked(const TabooList& taboo, const ItemRecord& i) { return blocked(taboo, i.id, i.name, i.fv_term); }

Recommendation spot_rec(const SpotRecord& s, double strength, std::string rationale) {
  return {ItemKind::kSpot, s.id, s.name, strength, {}, std::move(rationale), s.nearby};
}

struct Scored {
  const SpotRecord* spot;
  double key;
};

/// Highest key first, ties by ascending id.
std::vector<Scored> rank_spots(const Catalog& catalog, const TabooList& taboo, const std::string& skip,
                               const std::function<double(const SpotRecord&)>& key) {
  std::vector<Scored> out;
  for (const auto& s : catalog.spots)
    if (s.id != skip && !spot_blocked(taboo, s)) out.push_back({&s, key(s)});
  std::sort(out.begin(), out.end(), [](const Scored& a, const Scored& b) {
    if (a.key != b.key) return a.key > b.key;
    return a.spot->id < b.spot->id;
  });
  return out;
}

double av_strength(double av, const MembershipConfig& m, std::vector<std::string>& diagnostics) {
  const double h = fuzzify_av(av, m);
  const auto d = defuzzify(0.0, 1.0 - h, h, m);
  if (d.degenerate) diagnostics.push_back("no output membership; neutral strength used");
  return d.strength;
}

void stamp(Decision& d) {
  for (auto& r : d.recommendations) r.fired_rules = d.fired_rules;
}

Decision rule1(const TurnInput& in, const MembershipConfig& m, const RulesConfig& cfg, Decision d) {
  const SpotRecord* named = in.parsed.object ? in.catalog.find_spot(*in.parsed.object) : nullptr;
  auto av_of = [&](const SpotRecord& s) { return agreement_value(in.profile, s.impression); };
  if (named == nullptr)
    d.diagnostics.push_back("spot '" + in.parsed.object.value_or("") + "' is not in the catalog");

  const bool named_ok = named != nullptr && !spot_blocked(in.taboo, *named);
  const double named_av = named ? av_of(*named) : 0.0;
  const bool high = named_ok && fuzzify_av(named_av, m) >= 0.5;
  if (high) {
    d.recommendations.push_back(spot_rec(*named, av_strength(named_av, m, d.diagnostics),
                                         "AV " + format_fixed(named_av) + " with the session profile"));
    d.directive = named->name + " suits your current mood.";
  } else if (named != nullptr) {
    d.directive = named->name + " does not match your current mood; these may suit you better.";
  } else {
    d.directive = "Here are spots that match your current mood.";
  }
  for (const auto& sc : rank_spots(in.catalog, in.taboo, named ? named->id : std::string{}, av_of)) {
    if (d.recommendations.size() >= cfg.few) break;
    d.recommendations.push_back(spot_rec(*sc.spot, av_strength(sc.key, m, d.diagnostics),
                                         "AV " + format_fixed(sc.key) + " with the session profile"));
  }
  return d;
}

Decision rule2(const TurnInput& in, const MembershipConfig& m, const RulesConfig& cfg, Decision d) {
  const std::string skip = in.parsed.object.value_or("");
  auto score = [](const SpotRecord& s) { return affect::positivity(s.impression); };
  for (const auto& sc : rank_spots(in.catalog, in.taboo, skip, score)) {
    if (d.recommendations.size() >= cfg.few) break;
    double mass = 0.0;
    for (double x : sc.spot->impression) mass += x;
    const double balance = mass > 0.0 ? sc.key / mass : 0.0;
    const auto fm = fuzzify_fv(balance, m);
    const auto s = defuzzify(fm.dislike, fm.normal, fm.like, m);
    if (s.degenerate) d.diagnostics.push_back("no output membership; neutral strength used");
    d.recommendations.push_back(
        spot_rec(*sc.spot, s.strength, "positivity score " + format_fixed(sc.key) + " for a low mood"));
  }
  d.directive = "You seem down. These spots tend to lift the mood.";
  return d;
}

Decision rule4(const TurnInput& in, const MembershipConfig& m, const RulesConfig& cfg, Decision d) {
  auto av_of = [&](const SpotRecord& s) { return agreement_value(in.profile, s.impression); };
  for (const auto& sc : rank_spots(in.catalog, in.taboo, {}, av_of)) {
    if (d.recommendations.size() >= cfg.few) break;
    d.recommendations.push_back(spot_rec(*sc.spot, av_strength(sc.key, m, d.diagnostics),
                                         "AV " + format_fixed(sc.key) + " with the session profile"));
  }
  d.directive = "Here are a few spots close to your mood.";
  return d;
}

Decision food_gift(const TurnInput& in, const MembershipConfig& m, const RulesConfig& cfg, Decision d) {
  std::optional<ItemKind> named_kind;
  const ItemRecord* named = nullptr;
  if (in.parsed.object) {
    if (auto hit = in.catalog.find_item(*in.parsed.object)) {
      named_kind = hit->first;
      named = hit->second;
    }
  }
  ItemKind kind = ItemKind::kFood;
  if (in.parsed.object_category == Category::kGift || in.parsed.verb_lemma == "buy") kind = ItemKind::kGift;
  if (in.parsed.object_category == Category::kFood) kind = ItemKind::kFood;
  if (named_kind && *named_kind != kind) named = nullptr;

  struct Candidate {
    const ItemRecord* item;
    double fv;
    double strength;
  };
  std::vector<Candidate> candidates;
  const auto& pool = kind == ItemKind::kGift ? in.catalog.gifts : in.catalog.foods;
  for (const auto& item : pool) {
    if (item_blocked(in.taboo, item)) continue;
    const double fv = in.db.lookup(item.fv_term, in.person).value;
    const auto fm = fuzzify_fv(fv, m);
    const auto s = defuzzify(fm.dislike, fm.normal, fm.like, m);
    if (s.degenerate) d.diagnostics.push_back("no output membership for " + item.id + "; neutral strength used");
    candidates.push_back({&item, fv, s.strength});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if ((a.fv > 0.0) != (b.fv > 0.0)) return a.fv > 0.0;
    if (a.strength != b.strength) return a.strength > b.strength;
    return a.item->id < b.item->id;
  });
  if (named != nullptr) {
    auto it = std::find_if(candidates.begin(), candidates.end(), [&](const Candidate& c) { return c.item == named; });
    if (it != candidates.end() && it->fv > 0.0) std::rotate(candidates.begin(), it, it + 1);
  }
  if (candidates.size() > cfg.few) candidates.resize(cfg.few);

  for (const auto& c : candidates)
    d.recommendations.push_back({kind, c.item->id, c.item->name, c.strength, {},
                                 "FV " + format_fixed(c.fv) + " for " + c.item->fv_term, c.item->nearby});
  if (d.recommendations.empty()) {
    d.diagnostics.push_back("no " + normalize_term(to_string(kind)) + " candidates left after taboo filtering");
    d.directive = "I have nothing to suggest there right now.";
  } else {
    d.directive = "How about " + d.recommendations.front().name + "?";
  }
  return d;
}

Decision rule7(const TurnInput& in, const MembershipConfig& m, const RulesConfig& cfg, Decision d) {
  std::vector<std::string> scan = in.parsed.nouns;
  if (in.parsed.object && std::find(scan.begin(), scan.end(), *in.parsed.object) == scan.end())
    scan.push_back(*in.parsed.object);
  std::vector<std::string> disliked;
  for (const auto& term : scan) {
    if (in.db.lookup(term, in.person).value < cfg.dislike_threshold) {
      disliked.push_back(term);
      if (d.taboo.insert(term).second) d.captured.push_back(term);
    }
  }
  if (disliked.empty()) {
    d.directive = "I see. Please tell me more.";
    return d;
  }

  // Propose the most liked catalog entry that the taboo list leaves open.
  std::optional<Recommendation> best;
  double best_fv = 0.0;
  auto consider = [&](ItemKind kind, const std::string& id, const std::string& name, const std::string& term,
                      const std::vector<std::string>& nearby) {
    const double fv = in.db.lookup(term, in.person).value;
    if (best && (fv < best_fv || (fv == best_fv && id >= best->id))) return;
    best_fv = fv;
    best = Recommendation{kind, id, name, 0.0, {}, "FV " + format_fixed(fv) + " for " + term, nearby};
  };
  for (const auto& s : in.catalog.spots)
    if (!spot_blocked(d.taboo, s)) consider(ItemKind::kSpot, s.id, s.name, s.id, s.nearby);
  for (const auto& f : in.catalog.foods)
    if (!item_blocked(d.taboo, f)) consider(ItemKind::kFood, f.id, f.name, f.fv_term, f.nearby);
  for (const auto& g : in.catalog.gifts)
    if (!item_blocked(d.taboo, g)) consider(ItemKind::kGift, g.id, g.name, g.fv_term, g.nearby);

  std::string words;
  for (const auto& t : disliked) words += (words.empty() ? "" : ", ") + t;
  if (!best) {
    d.directive = "Let's leave " + words + " aside. Please tell me more.";
    d.diagnostics.push_back("every catalog entry is taboo");
    return d;
  }
  const auto fm = fuzzify_fv(best_fv, m);
  const auto s = defuzzify(fm.dislike, fm.normal, fm.like, m);
  if (s.degenerate) d.diagnostics.push_back("no output membership; neutral strength used");
  best->strength = s.strength;
  d.directive = "Let's leave " + words + " aside. How about " + best->name + "?";
  d.recommendations.push_back(std::move(*best));
  return d;
}

Decision start(const TurnInput& in, std::string entry) {
  Decision d;
  d.entry_rule = entry;
  d.fired_rules = {std::move(entry)};
  d.taboo = in.taboo;
  return d;
}

bool negative(const TurnInput& in) { return affect::is_negative(in.emotion); }

}  // namespace

Decision select_spots_case1(const TurnInput& in, const MembershipConfig& m, const RulesConfig& cfg) {
  if (in.catalog.spots.empty()) throw Error(ErrorCode::kNoCandidates, "catalog has no spots");
  Decision d;
  const std::string entry = route_rule(CaseRoute::kCase1, in.parsed.object_category, in.emotion.valence);
  if (entry == "R1") d = rule1(in, m, cfg, start(in, entry));
  else if (entry == "R2") d = rule2(in, m, cfg, start(in, entry));
  else if (entry == "R3") d = food_gift(in, m, cfg, start(in, entry));
  else if (entry == "R4") d = rule4(in, m, cfg, start(in, entry));
  else {
    d = start(in, entry);
    d.fired_rules.push_back("RC3");
    d.fired_rules.push_back("R7");
    d = rule7(in, m, cfg, std::move(d));
  }
  stamp(d);
  return d;
}

Decision select_food_gift_case2(const TurnInput& in, const MembershipConfig& m, const RulesConfig& cfg) {
  Decision d = food_gift(in, m, cfg, start(in, "R6"));
  stamp(d);
  return d;
}

Decision handle_talk_case3(const TurnInput& in, const MembershipConfig& m, const RulesConfig& cfg) {
  Decision d;
  if (negative(in)) {
    d = rule7(in, m, cfg, start(in, "R7"));
  } else {
    d = start(in, "R8");
    switch (in.parsed.object_category) {
      case Category::kSpot:
        d.fired_rules.insert(d.fired_rules.end(), {"RC1", "R1"});
        if (in.catalog.spots.empty()) throw Error(ErrorCode::kNoCandidates, "catalog has no spots");
        d = rule1(in, m, cfg, std::move(d));
        break;
      case Category::kFood:
      case Category::kGift:
        d.fired_rules.insert(d.fired_rules.end(), {"RC2", "R6"});
        d = food_gift(in, m, cfg, std::move(d));
        break;
      case Category::kOther:
      case Category::kNone:
        d.fired_rules.insert(d.fired_rules.end(), {"RC1", "R4"});
        if (in.catalog.spots.empty()) throw Error(ErrorCode::kNoCandidates, "catalog has no spots");
        d = rule4(in, m, cfg, std::move(d));
        break;
    }
  }
  stamp(d);
  return d;
}

Decision decide(const TurnInput& in, const MembershipConfig& m, const RulesConfig& cfg) {
  switch (in.parsed.route) {
    case CaseRoute::kCase1:
      return select_spots_case1(in, m, cfg);
    case CaseRoute::kCase2:
      return select_food_gift_case2(in, m, cfg);
    case CaseRoute::kCase3:
      break;
  }
  return handle_talk_case3(in, m, cfg);
}

std::vector<Recommendation> filter_taboo(std::vector<Recommendation> recs, const TabooList& taboo,
                                         const Catalog& catalog) {
  if (taboo.empty()) return recs;
  std::erase_if(recs, [&](const Recommendation& r) {
    std::string fv_term;
    if (r.kind != ItemKind::kSpot)
      if (auto hit = catalog.find_item(r.id)) fv_term = hit->second->fv_term;
    return blocked(taboo, r.id, r.name, fv_term);
  });
  for (auto& r : recs) {
    std::erase_if(r.nearby, [&](const std::string& id) {
      const auto* s = catalog.find_spot(id);
      return s ? spot_blocked(taboo, *s) : taboo.contains(id);
    });
  }
  return recs;
}

ConciergeNet compile_concierge_net(const RulesConfig& cfg) {
  using fpn::RuleType;
  const double r1 = cfg.cf_of("R1");
  std::vector<fpn::RuleSpec> specs = {
      {"C1", RuleType::kType3, {"verb-case1", "reroute-case1"}, {"case1-active"}, {1.0, cfg.cf_of("RC1")}},
      {"C2", RuleType::kType3, {"verb-case2", "reroute-case2"}, {"case2-active"}, {1.0, cfg.cf_of("RC2")}},
      {"C3", RuleType::kType3, {"verb-case3", "reroute-case3"}, {"case3-active"}, {1.0, cfg.cf_of("RC3")}},
      {"G1", RuleType::kType1, {"case1-active", "noun-spot"}, {"obj-is-spot"}, {1.0}},
      {"G2", RuleType::kType1, {"case1-active", "noun-food-gift"}, {"obj-is-food-gift"}, {1.0}},
      {"G3", RuleType::kType1, {"case1-active", "noun-nothing"}, {"obj-is-nothing"}, {1.0}},
      {"R1", RuleType::kType1, {"obj-is-spot", "av-high"}, {"recommend-spot"}, {r1}},
      {"R1b", RuleType::kType1, {"obj-is-spot", "av-not-high"}, {"recommend-alt-spot"}, {r1}},
      {"R2", RuleType::kType1, {"obj-is-spot", "emotion-negative"}, {"recommend-positive-spot"}, {cfg.cf_of("R2")}},
      {"R3", RuleType::kType1, {"obj-is-food-gift", "fv-positive"}, {"recommend-food-gift"}, {cfg.cf_of("R3")}},
      {"R4", RuleType::kType1, {"obj-is-nothing", "av-high"}, {"recommend-few-spots"}, {cfg.cf_of("R4")}},
      {"R5", RuleType::kType1, {"obj-is-nothing", "emotion-negative"}, {"reroute-case3"}, {cfg.cf_of("R5")}},
      {"R6", RuleType::kType1, {"case2-active", "fv-positive"}, {"recommend-food-gift"}, {cfg.cf_of("R6")}},
      {"R7", RuleType::kType1, {"case3-active", "emotion-negative"}, {"continue-talk"}, {cfg.cf_of("R7")}},
      {"R8a", RuleType::kType1, {"case3-active", "emotion-not-negative", "noun-spot"}, {"reroute-case1"},
       {cfg.cf_of("R8")}},
      {"R8b", RuleType::kType1, {"case3-active", "emotion-not-negative", "noun-food-gift"}, {"reroute-case2"},
       {cfg.cf_of("R8")}},
      {"R8c", RuleType::kType1, {"case3-active", "emotion-not-negative", "noun-nothing"}, {"reroute-case1"},
       {cfg.cf_of("R8")}},
  };
  const std::map<std::string, std::string> labels = {
      {"verb-case1", "verb selects Case 1"},
      {"verb-case2", "verb selects Case 2"},
      {"verb-case3", "verb selects Case 3"},
      {"case1-active", "Case 1 active"},
      {"case2-active", "Case 2 active"},
      {"case3-active", "Case 3 active"},
      {"noun-spot", "object noun is a spot"},
      {"noun-food-gift", "object noun is a food or gift"},
      {"noun-nothing", "no spot/food/gift object"},
      {"obj-is-spot", "Obj is Spot"},
      {"obj-is-food-gift", "Obj is Food or Gift"},
      {"obj-is-nothing", "Obj is nothing"},
      {"av-high", "AV of Emotion is high"},
      {"av-not-high", "AV of Emotion is not high"},
      {"fv-positive", "FV is positive"},
      {"emotion-negative", "Emotion is negative"},
      {"emotion-not-negative", "Emotion is not negative"},
      {"recommend-spot", "Recommend Spot"},
      {"recommend-alt-spot", "Recommend another Spot"},
      {"recommend-positive-spot", "Recommend Spots where emotion becomes positive"},
      {"recommend-few-spots", "Select a few Spots"},
      {"recommend-food-gift", "Recommend Food or Gift"},
      {"continue-talk", "Continue talk"},
      {"reroute-case1", "Go to Case 1"},
      {"reroute-case2", "Go to Case 2"},
      {"reroute-case3", "Go to Case 3"},
  };
  ConciergeNet cn{fpn::compile_rules(specs, labels), {}};
  for (const auto& t : cn.net.transitions()) {
    const std::string& id = t.id;
    if (id == "C1.2") cn.rule_of[id] = "RC1";
    else if (id == "C2.2") cn.rule_of[id] = "RC2";
    else if (id == "C3.2") cn.rule_of[id] = "RC3";
    else if (id.front() == 'R') cn.rule_of[id] = id.substr(0, 2);
  }
  return cn;
}

fpn::Marking turn_evidence(const TurnInput& in, const MembershipConfig& m) {
  fpn::Marking mk;
  auto put = [&](const std::string& prop, double degree) { mk.set(fpn::place_id_for(prop), degree); };
  put("verb-case1", in.parsed.route == CaseRoute::kCase1 ? 1.0 : 0.0);
  put("verb-case2", in.parsed.route == CaseRoute::kCase2 ? 1.0 : 0.0);
  put("verb-case3", in.parsed.route == CaseRoute::kCase3 ? 1.0 : 0.0);

  const Category cat = in.parsed.object_category;
  const bool is_spot = cat == Category::kSpot;
  const bool is_item = cat == Category::kFood || cat == Category::kGift;
  put("noun-spot", is_spot ? 1.0 : 0.0);
  put("noun-food-gift", is_item ? 1.0 : 0.0);
  put("noun-nothing", !is_spot && !is_item ? 1.0 : 0.0);

  double av_high = 0.0;
  const SpotRecord* named = is_spot && in.parsed.object ? in.catalog.find_spot(*in.parsed.object) : nullptr;
  if (named != nullptr) {
    av_high = fuzzify_av(agreement_value(in.profile, named->impression), m);
  } else {
    for (const auto& s : in.catalog.spots)
      if (!spot_blocked(in.taboo, s)) av_high = std::max(av_high, fuzzify_av(agreement_value(in.profile, s.impression), m));
  }
  put("av-high", av_high);
  put("av-not-high", 1.0 - av_high);

  double fv_positive = 0.0;
  std::optional<std::pair<ItemKind, const ItemRecord*>> hit;
  if (is_item && in.parsed.object) hit = in.catalog.find_item(*in.parsed.object);
  if (hit) {
    fv_positive = fuzzify_fv(in.db.lookup(hit->second->fv_term, in.person).value, m).like;
  } else {
    const bool gift = cat == Category::kGift || in.parsed.verb_lemma == "buy";
    for (const auto& item : gift ? in.catalog.gifts : in.catalog.foods)
      if (!item_blocked(in.taboo, item))
        fv_positive = std::max(fv_positive, fuzzify_fv(in.db.lookup(item.fv_term, in.person).value, m).like);
  }
  put("fv-positive", fv_positive);

  const bool neg = affect::is_negative(in.emotion);
  put("emotion-negative", neg ? 1.0 : 0.0);
  put("emotion-not-negative", neg ? 0.0 : 1.0);
  return mk;
}

NetOutcome run_concierge_net(const ConciergeNet& cn, const fpn::Marking& evidence, double lambda) {
  fpn::ReasoningConfig rc;
  rc.lambda = lambda;
  NetOutcome out{fpn::run(cn.net, evidence, rc), {}};
  for (const auto& f : out.run.trace) {
    auto it = cn.rule_of.find(f.transition);
    if (it == cn.rule_of.end()) continue;
    if (std::find(out.fired_rules.begin(), out.fired_rules.end(), it->second) == out.fired_rules.end())
      out.fired_rules.push_back(it->second);
  }
  return out;
}

}  // namespace concierge::rules
