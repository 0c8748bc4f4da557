#include <doctest.h>

#include "concierge/caseframe_parser.hpp"
#include "concierge/error.hpp"
#include "support/fixtures.hpp"

using namespace concierge;
using namespace concierge::parse;
using egc::DeepCase;
using egc::EventType;

namespace {

const Lexicon& lex() { return fixtures::bundle().lexicon; }

std::vector<VerbEntry> required_verbs() {
  return {
      {"go", {}, CaseRoute::kCase1, EventType::kVSOT},   {"come", {}, CaseRoute::kCase1, EventType::kVSOT},
      {"see", {}, CaseRoute::kCase1, EventType::kVSO},   {"look_for", {}, CaseRoute::kCase1, EventType::kVSO},
      {"eat", {}, CaseRoute::kCase2, EventType::kVSO},   {"buy", {}, CaseRoute::kCase2, EventType::kVSO},
      {"hungry", {}, CaseRoute::kCase2, EventType::kASC}, {"talk", {}, CaseRoute::kCase3, EventType::kVSO},
  };
}

}  // namespace

TEST_CASE("tokenize: worked examples") {
  const std::set<std::string> stop = {"i", "to"};
  CHECK(tokenize("I want to go to Miyajima!", stop) == std::vector<std::string>{"want", "go", "miyajima"});
  CHECK(tokenize("EAT okonomiyaki", stop) == std::vector<std::string>{"eat", "okonomiyaki"});
  CHECK(tokenize("please look up a cafe", {"a", "up", "please"}) == std::vector<std::string>{"look_for", "cafe"});
  CHECK_THROWS_AS(tokenize("", stop), Error);
  try {
    tokenize("  I, to!  ", stop);
    FAIL("expected empty utterance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyUtterance);
  }
}

TEST_CASE("parse: go to miyajima") {
  const auto p = parse::parse("go to miyajima", lex());
  CHECK(p.route == CaseRoute::kCase1);
  CHECK(p.verb_lemma == "go");
  CHECK(p.frame.event_type == EventType::kVSOT);
  CHECK(p.frame.slots.at(DeepCase::kSubject) == "user");
  CHECK(p.frame.slots.at(DeepCase::kObjectTo) == "miyajima");
  CHECK(p.frame.slots.at(DeepCase::kPredicate) == "go");
  CHECK(p.object_category == Category::kSpot);
}

TEST_CASE("parse: i am hungry") {
  const auto p = parse::parse("i am hungry", lex());
  CHECK(p.route == CaseRoute::kCase2);
  CHECK(p.verb_lemma == "hungry");
  CHECK(p.object_category == Category::kNone);
  CHECK_FALSE(p.object.has_value());
  CHECK(p.frame.event_type == EventType::kASC);
}

TEST_CASE("parse: small talk fallback") {
  const auto p = parse::parse("nice weather today", lex());
  CHECK(p.route == CaseRoute::kCase3);
  CHECK(p.verb_lemma == "talk");
}

TEST_CASE("parse: multi-word nouns and first-verb selection") {
  const auto p = parse::parse("Could we see the Atomic Bomb Dome, then eat okonomiyaki?", lex());
  CHECK(p.verb_lemma == "see");
  CHECK(p.object == "atomic_bomb_dome");
  CHECK(p.object_category == Category::kSpot);
  CHECK(p.nouns == std::vector<std::string>{"atomic_bomb_dome", "okonomiyaki"});
}

TEST_CASE("parse: a frame missing its object slot downgrades to V(S)") {
  const auto p = parse::parse("let us go", lex());
  CHECK(p.route == CaseRoute::kCase1);
  CHECK(p.frame.event_type == EventType::kVS);
  CHECK(p.frame.slots.size() == 2);
}

TEST_CASE("parse: every verb and synonym routes to its declared case") {
  for (const auto& v : lex().verbs()) {
    for (const auto& form : [&] {
           auto forms = v.synonyms;
           forms.push_back(v.lemma == "look_for" ? "look for" : v.lemma);
           return forms;
         }()) {
      const auto p = parse::parse(form + " miyajima", lex());
      CHECK_MESSAGE(p.route == v.route, form);
      CHECK_MESSAGE(p.verb_lemma == v.lemma, form);
    }
  }
}

TEST_CASE("parse: deterministic and total on non-empty text") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> words = {"go", "eat", "talk", "miyajima", "okonomiyaki", "the", "closed",
                                          "weather", "buy", "!", "look", "up", "zzz", "Hiroshima", "castle"};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1), len(1, 7);
  for (int i = 0; i < 300; ++i) {
    std::string text;
    for (std::size_t k = len(rng); k > 0; --k) text += words[pick(rng)] + " ";
    try {
      const auto a = parse::parse(text, lex());
      const auto b = parse::parse(text, lex());
      CHECK(a.frame == b.frame);
      CHECK(a.route == b.route);
      CHECK(a.nouns == b.nouns);
      CHECK(a.route == lex().find_verb(a.verb_lemma)->route);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kEmptyUtterance);
    }
  }
}

TEST_CASE("lexicon round trip: adding and removing a noun") {
  const auto before = parse::parse("go to kintaikyo", lex());
  CHECK(before.object_category == Category::kOther);
  const auto added = lex().with_noun({"kintaikyo", Category::kSpot});
  const auto with = parse::parse("go to kintaikyo", added);
  CHECK(with.object_category == Category::kSpot);
  CHECK(with.nouns == std::vector<std::string>{"kintaikyo"});
  const auto removed = added.without_noun("kintaikyo");
  const auto after = parse::parse("go to kintaikyo", removed);
  CHECK(after.object_category == Category::kOther);
  CHECK(after.nouns.empty());
}

TEST_CASE("lexicon validation") {
  CHECK_NOTHROW(Lexicon(required_verbs(), {}, {}));

  auto dup = required_verbs();
  dup.push_back({"go", {}, CaseRoute::kCase1, EventType::kVSOT});
  CHECK_THROWS_AS(Lexicon(dup, {}, {}), Error);

  auto overlap = required_verbs();
  overlap[0].synonyms = {"visit"};
  overlap[1].synonyms = {"visit"};
  try {
    Lexicon(overlap, {}, {});
    FAIL("expected overlap error");
  } catch (const Error& e) {
    CHECK(e.detail() == "/verbs/1/synonyms/0");
  }

  auto missing = required_verbs();
  missing.pop_back();
  CHECK_THROWS_AS(Lexicon(missing, {}, {}), Error);

  auto wrong_case = required_verbs();
  wrong_case[4].route = CaseRoute::kCase1;
  CHECK_THROWS_AS(Lexicon(wrong_case, {}, {}), Error);

  CHECK_THROWS_AS(Lexicon(required_verbs(), {{"x", Category::kSpot}, {"x", Category::kFood}}, {}), Error);
}
