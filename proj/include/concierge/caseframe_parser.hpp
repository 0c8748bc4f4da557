#pragma once

// Keyword/lexicon case-frame extraction over romanized, lowercased text.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "concierge/egc.hpp"

namespace concierge::parse {

enum class CaseRoute { kCase1, kCase2, kCase3 };
std::string_view to_string(CaseRoute route);
std::optional<CaseRoute> parse_case_route(std::string_view text);

enum class Category { kSpot, kFood, kGift, kOther, kNone };
std::string_view to_string(Category c);
std::optional<Category> parse_category(std::string_view text);

struct VerbEntry {
  std::string lemma;
  std::vector<std::string> synonyms;
  CaseRoute route = CaseRoute::kCase3;
  egc::EventType event_type = egc::EventType::kVS;
};

struct NounEntry {
  std::string term;
  Category category = Category::kOther;
};

/// Immutable verb/noun/stopword tables. Construction enforces unique lemmas,
/// non-overlapping synonyms and the presence of the routing verbs (go, come,
/// see, look_for / eat, buy, hungry / talk) on their cases.
class Lexicon {
 public:
  Lexicon(std::vector<VerbEntry> verbs, std::vector<NounEntry> nouns, std::set<std::string> stopwords);

  const VerbEntry* find_verb(std::string_view token) const;
  std::optional<Category> noun_category(std::string_view term) const;
  bool is_stopword(std::string_view token) const { return stopwords_.contains(std::string(token)); }

  const std::vector<VerbEntry>& verbs() const { return verbs_; }
  const std::vector<NounEntry>& nouns() const { return nouns_; }
  const std::set<std::string>& stopwords() const { return stopwords_; }

  Lexicon with_noun(NounEntry noun) const;
  Lexicon without_noun(std::string_view term) const;

 private:
  std::vector<VerbEntry> verbs_;
  std::vector<NounEntry> nouns_;
  std::set<std::string> stopwords_;
  std::unordered_map<std::string, std::size_t> verb_by_form_;
  std::unordered_map<std::string, std::size_t> noun_by_term_;
};

inline constexpr std::string_view kDefaultSubject = "user";
inline constexpr std::string_view kTalkLemma = "talk";

struct ParsedUtterance {
  egc::CaseFrame frame;
  std::string verb_lemma;
  CaseRoute route = CaseRoute::kCase3;
  Category object_category = Category::kNone;
  std::optional<std::string> object;
  std::vector<std::string> nouns;
};

/// Lowercase, drop punctuation, split on whitespace, fold "look up" and
/// "look for" into look_for, then drop stopwords. Throws
/// Error(kEmptyUtterance) when nothing is left.
std::vector<std::string> tokenize(std::string_view text, const std::set<std::string>& stopwords);

ParsedUtterance parse(std::string_view text, const Lexicon& lexicon);

}  // namespace concierge::parse
