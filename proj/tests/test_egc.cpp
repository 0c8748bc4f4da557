#include <doctest.h>

#include <random>

#include "concierge/egc.hpp"
#include "concierge/error.hpp"
#include "support/egc_tables.hpp"

using namespace concierge;
using namespace concierge::egc;

namespace {

CaseFrame frame(EventType type, std::map<DeepCase, std::string> slots) { return {type, std::move(slots)}; }

FVDatabase db_with(std::initializer_list<std::pair<const char*, double>> values) {
  FVDatabase db;
  for (auto [t, v] : values) db.set_initial(t, FavoriteValue(v));
  return db;
}

}  // namespace

TEST_CASE("lookup_fv: personal over initial, unknown defaults to zero") {
  FVDatabase db;
  db.set_initial("Okonomiyaki ", FavoriteValue(0.4));
  db.set_personal("alice", "okonomiyaki", FavoriteValue(0.9));

  CHECK(db.lookup("okonomiyaki", std::string("alice")).value == 0.9);
  CHECK(db.lookup("okonomiyaki", std::string("alice")).source == FvSource::kPersonal);
  CHECK(db.lookup("okonomiyaki", std::string("bob")).value == 0.4);
  CHECK(db.lookup("okonomiyaki").value == 0.4);
  const auto unknown = db.lookup("durian");
  CHECK(unknown.value == 0.0);
  CHECK(unknown.unknown());

  CHECK_THROWS_AS(FavoriteValue(1.5), Error);
  CHECK_THROWS_AS(FavoriteValue(-1.01), Error);
}

TEST_CASE("event type names round trip") {
  for (auto t : all_event_types()) CHECK(parse_event_type(to_string(t)) == t);
  CHECK(parse_event_type("V(S, O, I)") == EventType::kVSOI);
  CHECK_FALSE(parse_event_type("V(X)").has_value());
}

TEST_CASE("assign_axes: worked rows") {
  using D = DeepCase;
  {
    auto db = db_with({{"s", 0.8}, {"src", 0.3}, {"p", 0.6}});
    auto axes = assign_axes(frame(EventType::kVSOS, {{D::kSubject, "s"}, {D::kObjectSource, "src"}, {D::kPredicate, "p"}}), db);
    CHECK(axes.f1 == doctest::Approx(0.5));
    CHECK(axes.f2 == 0.5);
    CHECK(axes.f3 == 0.6);
  }
  {
    auto db = db_with({{"s", 0.8}, {"o", 0.6}, {"p", 0.7}});
    auto axes = assign_axes(frame(EventType::kVSO, {{D::kSubject, "s"}, {D::kObject, "o"}, {D::kPredicate, "p"}}), db);
    CHECK(axes == EmotionAxes{0.8, 0.6, 0.7});
  }
  {
    auto db = db_with({{"s", 0.8}, {"o", 0.5}, {"i", -0.4}, {"p", 0.6}});
    auto axes = assign_axes(
        frame(EventType::kVSOI, {{D::kSubject, "s"}, {D::kObject, "o"}, {D::kInstrument, "i"}, {D::kPredicate, "p"}}), db);
    CHECK(axes == EmotionAxes{0.5, 0.4, 0.6});
  }
}

TEST_CASE("assign_axes: subtraction rows clamp") {
  using D = DeepCase;
  auto db = db_with({{"s", 0.5}, {"from", 1.0}, {"to", -1.0}, {"p", 0.5}});
  auto axes = assign_axes(
      frame(EventType::kVSOF, {{D::kSubject, "s"}, {D::kObjectFrom, "from"}, {D::kObjectTo, "to"}, {D::kPredicate, "p"}}), db);
  CHECK(axes.f2 == -1.0);

  auto db2 = db_with({{"s", -1.0}, {"src", 1.0}, {"p", 0.5}});
  auto axes2 = assign_axes(frame(EventType::kVSOS, {{D::kSubject, "s"}, {D::kObjectSource, "src"}, {D::kPredicate, "p"}}), db2);
  CHECK(axes2.f1 == -1.0);
}

TEST_CASE("assign_axes: V(S,OT) without an origin uses the destination alone") {
  using D = DeepCase;
  auto db = db_with({{"user", 0.8}, {"miyajima", 0.7}, {"go", 0.5}});
  auto axes = assign_axes(frame(EventType::kVSOT, {{D::kSubject, "user"}, {D::kObjectTo, "miyajima"}, {D::kPredicate, "go"}}), db);
  CHECK(axes == EmotionAxes{0.8, 0.7, 0.5});
}

TEST_CASE("assign_axes: V(S,O) falls back when the subject has no FV") {
  using D = DeepCase;
  auto db = db_with({{"o", -0.6}, {"p", 0.7}});
  EgcDiagnostics diag;
  auto axes = assign_axes(frame(EventType::kVSO, {{D::kSubject, "stranger"}, {D::kObject, "o"}, {D::kPredicate, "p"}}), db,
                          std::nullopt, &diag);
  CHECK(axes == EmotionAxes{-0.6, kDummyFv, 0.7});
  CHECK(diag.subject_fallback);
  CHECK(diag.unknown_terms == std::vector<std::string>{"stranger"});
}

TEST_CASE("assign_axes: missing slot names the slot") {
  using D = DeepCase;
  FVDatabase db;
  try {
    assign_axes(frame(EventType::kVSOI, {{D::kSubject, "s"}, {D::kObject, "o"}, {D::kPredicate, "p"}}), db);
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidation);
    CHECK(e.detail() == "instrument");
  }
}

TEST_CASE("valence: octants and on-axis") {
  CHECK(valence({0.8, 0.6, 0.7}) == Valence::kPleasure);
  CHECK(valence({-0.8, 0.6, 0.7}) == Valence::kDispleasure);
  CHECK(valence({0.0, 0.6, 0.7}) == Valence::kNeutral);
  for (const auto& o : tables::kOctants) {
    const auto v = valence({0.3 * o.s1, 0.9 * o.s2, 0.5 * o.s3});
    CHECK(v == (o.pleasure ? Valence::kPleasure : Valence::kDispleasure));
  }
}

TEST_CASE("intensity") {
  CHECK(intensity({1, 1, 1}) == 1.0);
  CHECK(intensity({0, 0.6, 0.7}) == 0.0);
  CHECK(intensity({0.5, 0.5, 0.5}) == doctest::Approx(0.5).epsilon(1e-15));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mag(0.05, 1.0);
  for (int i = 0; i < 200; ++i) {
    EmotionAxes a{mag(rng), mag(rng), mag(rng)};
    CHECK(intensity(a) == intensity({-a.f1, a.f2, -a.f3}));
    EmotionAxes bigger = a;
    bigger.f2 = std::min(1.0, a.f2 + 0.01);
    if (bigger.f2 > a.f2) CHECK(intensity(bigger) > intensity(a));
  }
}

TEST_CASE("classify: worked examples") {
  SituationFlags f;
  CHECK(classify(Valence::kPleasure, f) == EmotionType::kJoy);
  CHECK(classify(Valence::kDispleasure, f) == EmotionType::kDistress);
  CHECK_FALSE(classify(Valence::kNeutral, f).has_value());

  SituationFlags hope;
  hope.prospect = Prospect::kProspective;
  CHECK(classify(Valence::kPleasure, hope) == EmotionType::kHope);

  SituationFlags envy;
  envy.target = Target::kOther;
  envy.other_fortune = OtherFortune::kDesirable;
  CHECK(classify(Valence::kDispleasure, envy) == EmotionType::kResentment);

  SituationFlags blame;
  blame.agent = Agent::kOther;
  blame.approval = Approval::kDisapproved;
  CHECK(classify(Valence::kDispleasure, blame) == EmotionType::kAnger);
}

TEST_CASE("classify: result group and polarity agree with the flags") {
  for (auto v : {Valence::kPleasure, Valence::kDispleasure}) {
    for (auto target : {Target::kSelf, Target::kOther})
      for (auto fortune : {OtherFortune::kNone, OtherFortune::kDesirable, OtherFortune::kUndesirable})
        for (auto prospect : {Prospect::kNone, Prospect::kProspective, Prospect::kConfirmed, Prospect::kDisconfirmed})
          for (auto agent : {Agent::kNone, Agent::kSelf, Agent::kOther})
            for (auto approval : {Approval::kNone, Approval::kApproved, Approval::kDisapproved}) {
              SituationFlags f{target, fortune, prospect, agent, approval};
              const auto e = classify(v, f);
              REQUIRE(e.has_value());
              CHECK(is_negative_type(*e) == (v == Valence::kDispleasure));
              const auto group = group_of(*e);
              if (prospect == Prospect::kProspective) CHECK(group == EmotionGroup::kProspectBased);
              else if (prospect != Prospect::kNone) CHECK(group == EmotionGroup::kConfirmation);
              else if (target == Target::kOther && fortune != OtherFortune::kNone)
                CHECK(group == EmotionGroup::kFortunesOfOthers);
              else if (agent != Agent::kNone && approval != Approval::kNone)
                CHECK(group == EmotionGroup::kWellBeingAttribution);
              else if (approval != Approval::kNone) CHECK(group == EmotionGroup::kAttribution);
              else CHECK(group == EmotionGroup::kWellBeing);
            }
  }
}

TEST_CASE("group membership matches the reference lists") {
  std::map<std::string, std::set<std::string>> seen;
  for (auto e : all_emotions()) seen[std::string(to_string(group_of(e)))].insert(std::string(to_string(e)));
  CHECK(seen == tables::groups());
  for (auto e : all_emotions()) CHECK(parse_emotion(to_string(e)) == e);
}

TEST_CASE("evaluate: composition") {
  using D = DeepCase;
  auto db = db_with({{"s", 0.8}, {"o", 0.6}, {"p", 0.7}, {"bad", -0.6}, {"zero", 0.0}});
  const auto joy = evaluate(frame(EventType::kVSO, {{D::kSubject, "s"}, {D::kObject, "o"}, {D::kPredicate, "p"}}), {}, db);
  CHECK(joy.emotion == EmotionType::kJoy);
  CHECK(joy.valence == Valence::kPleasure);
  CHECK(joy.intensity == doctest::Approx(0.6952053289772899).epsilon(1e-12));

  const auto flat = evaluate(frame(EventType::kVSO, {{D::kSubject, "s"}, {D::kObject, "zero"}, {D::kPredicate, "p"}}), {}, db);
  CHECK(flat == EmotionResult{std::nullopt, Valence::kNeutral, 0.0});

  const auto sad = evaluate(frame(EventType::kVSO, {{D::kSubject, "s"}, {D::kObject, "bad"}, {D::kPredicate, "p"}}), {}, db);
  CHECK(sad.emotion == EmotionType::kDistress);
  CHECK(sad.valence == Valence::kDispleasure);
  CHECK(sad.intensity > 0.0);
}

TEST_CASE("emotion_to_vector20") {
  const auto v = emotion_to_vector20({EmotionType::kJoy, Valence::kPleasure, 0.7});
  CHECK(v[0] == 0.7);
  double rest = 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) rest += v[i];
  CHECK(rest == 0.0);
  CHECK(emotion_to_vector20({std::nullopt, Valence::kNeutral, 0.0}) == Vector20{});
  const auto anger = emotion_to_vector20({EmotionType::kAnger, Valence::kDispleasure, 0.4});
  CHECK(anger[17] == 0.4);
}
