#include "concierge/caseframe_parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "concierge/error.hpp"
#include "concierge/text.hpp"

namespace concierge::parse {

std::string_view to_string(CaseRoute route) {
  switch (route) {
    case CaseRoute::kCase1:
      return "CASE1";
    case CaseRoute::kCase2:
      return "CASE2";
    case CaseRoute::kCase3:
      return "CASE3";
  }
  return "?";
}

std::optional<CaseRoute> parse_case_route(std::string_view text) {
  for (auto r : {CaseRoute::kCase1, CaseRoute::kCase2, CaseRoute::kCase3})
    if (to_string(r) == text) return r;
  return std::nullopt;
}

std::string_view to_string(Category c) {
  switch (c) {
    case Category::kSpot:
      return "Spot";
    case Category::kFood:
      return "Food";
    case Category::kGift:
      return "Gift";
    case Category::kOther:
      return "Other";
    case Category::kNone:
      return "None";
  }
  return "?";
}

std::optional<Category> parse_category(std::string_view text) {
  for (auto c : {Category::kSpot, Category::kFood, Category::kGift, Category::kOther, Category::kNone})
    if (to_string(c) == text) return c;
  return std::nullopt;
}

namespace {

[[noreturn]] void invalid(const std::string& message, const std::string& path) {
  throw Error(ErrorCode::kValidation, message + " at " + path, path);
}

struct RequiredVerb {
  std::string_view lemma;
  CaseRoute route;
};

constexpr RequiredVerb kRequiredVerbs[] = {
    {"go", CaseRoute::kCase1},  {"come", CaseRoute::kCase1}, {"see", CaseRoute::kCase1},
    {"look_for", CaseRoute::kCase1}, {"eat", CaseRoute::kCase2}, {"buy", CaseRoute::kCase2},
    {"hungry", CaseRoute::kCase2}, {"talk", CaseRoute::kCase3},
};

bool is_attribute(egc::EventType t) { return egc::to_string(t).front() == 'A'; }

}  // namespace

Lexicon::Lexicon(std::vector<VerbEntry> verbs, std::vector<NounEntry> nouns, std::set<std::string> stopwords)
    : verbs_(std::move(verbs)), nouns_(std::move(nouns)) {
  for (const auto& s : stopwords) stopwords_.insert(normalize_term(s));

  for (std::size_t i = 0; i < verbs_.size(); ++i) {
    auto& v = verbs_[i];
    const std::string path = "/verbs/" + std::to_string(i);
    v.lemma = normalize_term(v.lemma);
    if (v.lemma.empty()) invalid("empty verb lemma", path + "/lemma");
    if (!verb_by_form_.emplace(v.lemma, i).second) invalid("verb form '" + v.lemma + "' listed twice", path + "/lemma");
    for (std::size_t k = 0; k < v.synonyms.size(); ++k) {
      v.synonyms[k] = normalize_term(v.synonyms[k]);
      if (v.synonyms[k].empty()) invalid("empty synonym", path + "/synonyms/" + std::to_string(k));
      if (!verb_by_form_.emplace(v.synonyms[k], i).second)
        invalid("synonym '" + v.synonyms[k] + "' overlaps another verb form", path + "/synonyms/" + std::to_string(k));
    }
  }
  for (const auto& req : kRequiredVerbs) {
    auto it = verb_by_form_.find(std::string(req.lemma));
    if (it == verb_by_form_.end() || verbs_[it->second].lemma != req.lemma)
      invalid("required verb '" + std::string(req.lemma) + "' missing", "/verbs");
    if (verbs_[it->second].route != req.route)
      invalid("verb '" + std::string(req.lemma) + "' must route to " + std::string(to_string(req.route)),
              "/verbs/" + std::to_string(it->second) + "/case");
  }

  for (std::size_t i = 0; i < nouns_.size(); ++i) {
    auto& n = nouns_[i];
    const std::string path = "/nouns/" + std::to_string(i);
    n.term = normalize_term(n.term);
    if (n.term.empty()) invalid("empty noun term", path + "/term");
    if (n.category == Category::kNone) invalid("noun category cannot be None", path + "/category");
    if (!noun_by_term_.emplace(n.term, i).second) invalid("noun '" + n.term + "' listed twice", path + "/term");
  }
}

const VerbEntry* Lexicon::find_verb(std::string_view token) const {
  auto it = verb_by_form_.find(std::string(token));
  return it == verb_by_form_.end() ? nullptr : &verbs_[it->second];
}

std::optional<Category> Lexicon::noun_category(std::string_view term) const {
  auto it = noun_by_term_.find(normalize_term(term));
  if (it == noun_by_term_.end()) return std::nullopt;
  return nouns_[it->second].category;
}

Lexicon Lexicon::with_noun(NounEntry noun) const {
  auto nouns = nouns_;
  nouns.push_back(std::move(noun));
  return Lexicon(verbs_, std::move(nouns), stopwords_);
}

Lexicon Lexicon::without_noun(std::string_view term) const {
  auto nouns = nouns_;
  const std::string key = normalize_term(term);
  std::erase_if(nouns, [&](const NounEntry& n) { return n.term == key; });
  return Lexicon(verbs_, std::move(nouns), stopwords_);
}

std::vector<std::string> tokenize(std::string_view text, const std::set<std::string>& stopwords) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (unsigned char c : text) {
    if (std::isalnum(c) || c == '_') cleaned += static_cast<char>(std::tolower(c));
    else if (std::isspace(c)) cleaned += ' ';
  }

  std::vector<std::string> raw;
  std::istringstream in(cleaned);
  for (std::string word; in >> word;) raw.push_back(word);

  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == "look" && i + 1 < raw.size() && (raw[i + 1] == "up" || raw[i + 1] == "for")) {
      tokens.push_back("look_for");
      ++i;
      continue;
    }
    if (!stopwords.contains(raw[i])) tokens.push_back(raw[i]);
  }
  if (tokens.empty()) throw Error(ErrorCode::kEmptyUtterance, "utterance has no content words");
  return tokens;
}

ParsedUtterance parse(std::string_view text, const Lexicon& lexicon) {
  const auto raw_tokens = tokenize(text, lexicon.stopwords());

  // Join multi-word nouns (longest match, up to three tokens).
  struct Token {
    std::string text;
    const VerbEntry* verb = nullptr;
    std::optional<Category> noun;
  };
  std::vector<Token> tokens;
  for (std::size_t i = 0; i < raw_tokens.size();) {
    bool joined = false;
    for (std::size_t n = std::min<std::size_t>(3, raw_tokens.size() - i); n >= 2; --n) {
      std::string phrase = raw_tokens[i];
      for (std::size_t k = 1; k < n; ++k) phrase += "_" + raw_tokens[i + k];
      if (auto c = lexicon.noun_category(phrase)) {
        tokens.push_back({phrase, nullptr, c});
        i += n;
        joined = true;
        break;
      }
    }
    if (joined) continue;
    Token t{raw_tokens[i], nullptr, lexicon.noun_category(raw_tokens[i])};
    if (!t.noun) t.verb = lexicon.find_verb(t.text);
    tokens.push_back(std::move(t));
    ++i;
  }

  ParsedUtterance out;
  std::size_t start = 0;
  const VerbEntry* verb = nullptr;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].verb != nullptr) {
      verb = tokens[i].verb;
      start = i + 1;
      break;
    }
  }
  if (verb == nullptr) {
    verb = lexicon.find_verb(kTalkLemma);
    start = 0;
  }
  out.verb_lemma = verb->lemma;
  out.route = verb->route;

  for (const auto& t : tokens)
    if (t.noun) out.nouns.push_back(t.text);

  // Object: first lexicon noun after the verb, else first other content word.
  for (std::size_t i = start; i < tokens.size() && !out.object; ++i) {
    if (tokens[i].noun) {
      out.object = tokens[i].text;
      out.object_category = *tokens[i].noun;
    }
  }
  for (std::size_t i = start; i < tokens.size() && !out.object; ++i) {
    if (tokens[i].verb == nullptr) {
      out.object = tokens[i].text;
      out.object_category = Category::kOther;
    }
  }

  out.frame.event_type = verb->event_type;
  out.frame.slots[egc::DeepCase::kSubject] = std::string(kDefaultSubject);
  out.frame.slots[egc::DeepCase::kPredicate] = verb->lemma;
  const auto slot = egc::object_slot(verb->event_type);
  if (slot && out.object) out.frame.slots[*slot] = *out.object;

  const auto required = egc::required_slots(verb->event_type);
  const bool complete = std::all_of(required.begin(), required.end(),
                                    [&](egc::DeepCase d) { return out.frame.slots.contains(d); });
  if (!complete) {
    out.frame.event_type = is_attribute(verb->event_type) ? egc::EventType::kASC : egc::EventType::kVS;
    std::erase_if(out.frame.slots, [](const auto& kv) {
      return kv.first != egc::DeepCase::kSubject && kv.first != egc::DeepCase::kPredicate;
    });
  }
  return out;
}

}  // namespace concierge::parse
