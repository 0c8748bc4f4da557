#include "concierge/fpn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "concierge/error.hpp"
#include "concierge/text.hpp"

namespace concierge::fpn {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void invalid(const std::string& message, const std::string& path) {
  throw Error(ErrorCode::kValidation, message + " at " + path, path);
}

bool is_degree(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

std::string path_of(std::string_view root, std::size_t index, std::string_view field = {}) {
  std::string p = "/" + std::string(root) + "/" + std::to_string(index);
  if (!field.empty()) p += "/" + std::string(field);
  return p;
}

}  // namespace

FuzzyPetriNet::FuzzyPetriNet(std::vector<Proposition> propositions, std::vector<Place> places,
                             std::vector<Transition> transitions)
    : propositions_(std::move(propositions)),
      places_(std::move(places)),
      transitions_(std::move(transitions)) {
  std::set<std::string, std::less<>> proposition_ids;
  for (std::size_t i = 0; i < propositions_.size(); ++i) {
    const auto& d = propositions_[i];
    if (d.id.empty()) invalid("empty proposition id", path_of("propositions", i, "id"));
    if (!proposition_ids.insert(d.id).second)
      invalid("duplicate proposition id '" + d.id + "'", path_of("propositions", i, "id"));
  }

  for (std::size_t i = 0; i < places_.size(); ++i) {
    const auto& p = places_[i];
    if (p.id.empty()) invalid("empty place id", path_of("places", i, "id"));
    if (!place_by_id_.emplace(p.id, i).second)
      invalid("duplicate place id '" + p.id + "'", path_of("places", i, "id"));
    if (!proposition_ids.contains(p.proposition))
      invalid("place '" + p.id + "' references unknown proposition '" + p.proposition + "'",
              path_of("places", i, "proposition"));
    if (!place_by_proposition_.emplace(p.proposition, i).second)
      invalid("proposition '" + p.proposition + "' is bound to more than one place",
              path_of("places", i, "proposition"));
  }
  if (place_by_proposition_.size() != propositions_.size()) {
    for (std::size_t i = 0; i < propositions_.size(); ++i) {
      if (!place_by_proposition_.contains(propositions_[i].id))
        invalid("proposition '" + propositions_[i].id + "' has no place", path_of("propositions", i));
    }
  }

  input_idx_.reserve(transitions_.size());
  output_idx_.reserve(transitions_.size());
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& t = transitions_[i];
    if (t.id.empty()) invalid("empty transition id", path_of("transitions", i, "id"));
    if (!transition_by_id_.emplace(t.id, i).second)
      invalid("duplicate transition id '" + t.id + "'", path_of("transitions", i, "id"));
    if (!is_degree(t.mu))
      invalid("certainty factor " + format_number(t.mu) + " outside [0,1]",
              path_of("transitions", i, "mu"));
    if (t.inputs.empty()) invalid("transition has no inputs", path_of("transitions", i, "inputs"));
    if (t.outputs.empty()) invalid("transition has no outputs", path_of("transitions", i, "outputs"));

    auto resolve = [&](const std::vector<std::string>& ids, std::string_view field) {
      std::vector<std::size_t> idx;
      idx.reserve(ids.size());
      for (std::size_t k = 0; k < ids.size(); ++k) {
        auto it = place_by_id_.find(ids[k]);
        if (it == place_by_id_.end())
          invalid("arc references unknown place '" + ids[k] + "'",
                  path_of("transitions", i, field) + "/" + std::to_string(k));
        idx.push_back(it->second);
      }
      return idx;
    };
    input_idx_.push_back(resolve(t.inputs, "inputs"));
    output_idx_.push_back(resolve(t.outputs, "outputs"));
  }
}

std::optional<std::size_t> FuzzyPetriNet::place_index(std::string_view place_id) const {
  auto it = place_by_id_.find(std::string(place_id));
  if (it == place_by_id_.end()) return std::nullopt;
  return it->second;
}

const Place* FuzzyPetriNet::place_for_proposition(std::string_view proposition_id) const {
  auto it = place_by_proposition_.find(std::string(proposition_id));
  return it == place_by_proposition_.end() ? nullptr : &places_[it->second];
}

const Transition* FuzzyPetriNet::find_transition(std::string_view transition_id) const {
  auto it = transition_by_id_.find(std::string(transition_id));
  return it == transition_by_id_.end() ? nullptr : &transitions_[it->second];
}

Marking::Marking(Degrees degrees) {
  for (auto& [id, y] : degrees) set(id, y);
}

double Marking::degree(std::string_view place_id) const {
  auto it = degrees_.find(place_id);
  return it == degrees_.end() ? 0.0 : it->second;
}

void Marking::set(const std::string& place_id, double degree) {
  if (!is_degree(degree))
    invalid("degree " + format_number(degree) + " outside [0,1]", "/degrees/" + place_id);
  degrees_[place_id] = degree;
}

std::string place_id_for(std::string_view proposition_id) {
  return "p_" + std::string(proposition_id);
}

FuzzyPetriNet compile_rules(std::span<const RuleSpec> rules,
                            const std::map<std::string, std::string>& labels) {
  std::vector<Proposition> propositions;
  std::vector<Place> places;
  std::vector<Transition> transitions;
  std::set<std::string, std::less<>> seen;

  auto declare = [&](const std::string& d) {
    if (!seen.insert(d).second) return;
    auto label = labels.find(d);
    propositions.push_back({d, label == labels.end() ? d : label->second});
    places.push_back({place_id_for(d), d});
  };
  auto to_places = [](const std::vector<std::string>& ds) {
    std::vector<std::string> out;
    out.reserve(ds.size());
    for (const auto& d : ds) out.push_back(place_id_for(d));
    return out;
  };

  for (std::size_t r = 0; r < rules.size(); ++r) {
    const RuleSpec& rule = rules[r];
    const std::string path = path_of("rules", r);
    const std::string id = rule.id.empty() ? "r" + std::to_string(r + 1) : rule.id;

    if (rule.type == RuleType::kType4)
      throw Error(ErrorCode::kUnsupportedRuleType,
                  "rule '" + id + "': Type 4 rules have no clear implication and are not supported",
                  path);
    if (rule.antecedents.empty()) invalid("rule '" + id + "' has no antecedents", path + "/antecedents");
    if (rule.consequents.empty()) invalid("rule '" + id + "' has no consequents", path + "/consequents");
    for (std::size_t k = 0; k < rule.cf.size(); ++k) {
      if (!is_degree(rule.cf[k]))
        invalid("certainty factor " + format_number(rule.cf[k]) + " outside [0,1]",
                path + "/cf/" + std::to_string(k));
    }
    for (const auto& d : rule.antecedents)
      if (d.empty()) invalid("empty proposition id", path + "/antecedents");
    for (const auto& d : rule.consequents)
      if (d.empty()) invalid("empty proposition id", path + "/consequents");

    switch (rule.type) {
      case RuleType::kType1:
        if (rule.consequents.size() != 1)
          invalid("Type 1 rule needs exactly one consequent", path + "/consequents");
        if (rule.cf.size() != 1) invalid("Type 1 rule needs exactly one cf", path + "/cf");
        break;
      case RuleType::kType2:
        if (rule.antecedents.size() != 1)
          invalid("Type 2 rule needs exactly one antecedent", path + "/antecedents");
        if (rule.cf.size() != 1) invalid("Type 2 rule needs exactly one cf", path + "/cf");
        break;
      case RuleType::kType3:
        if (rule.antecedents.size() < 2)
          invalid("Type 3 rule needs at least two antecedents", path + "/antecedents");
        if (rule.consequents.size() != 1)
          invalid("Type 3 rule needs exactly one consequent", path + "/consequents");
        if (rule.cf.size() != rule.antecedents.size())
          invalid("Type 3 rule needs one cf per antecedent", path + "/cf");
        break;
      case RuleType::kType4:
        break;
    }

    for (const auto& d : rule.antecedents) declare(d);
    for (const auto& d : rule.consequents) declare(d);

    if (rule.type == RuleType::kType3) {
      for (std::size_t k = 0; k < rule.antecedents.size(); ++k) {
        transitions.push_back({id + "." + std::to_string(k + 1), rule.cf[k],
                               {place_id_for(rule.antecedents[k])},
                               {place_id_for(rule.consequents.front())}});
      }
    } else {
      transitions.push_back({id, rule.cf.front(), to_places(rule.antecedents), to_places(rule.consequents)});
    }
  }
  return FuzzyPetriNet(std::move(propositions), std::move(places), std::move(transitions));
}

bool enabled(const Transition& t, const Marking& m, double lambda) {
  return std::all_of(t.inputs.begin(), t.inputs.end(),
                     [&](const std::string& p) { return m.degree(p) >= lambda; });
}

double produced_degree(const Transition& t, const Marking& m) {
  double lowest = 1.0;
  for (const auto& p : t.inputs) lowest = std::min(lowest, m.degree(p));
  return lowest * t.mu;
}

Marking fire(const Transition& t, const Marking& m) {
  Marking next = m;
  const double y = produced_degree(t, m);
  for (const auto& p : t.outputs) {
    if (y > next.degree(p)) next.set(p, y);
  }
  return next;
}

RunResult run(const FuzzyPetriNet& net, const Marking& initial, const ReasoningConfig& cfg) {
  std::vector<std::size_t> order(net.transitions().size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return run(net, initial, cfg, order);
}

RunResult run(const FuzzyPetriNet& net, const Marking& initial, const ReasoningConfig& cfg,
              std::span<const std::size_t> order) {
  if (!is_degree(cfg.lambda)) invalid("lambda outside [0,1]", "/config/lambda");
  if (!(cfg.tolerance >= 0.0)) invalid("negative tolerance", "/config/tolerance");
  if (cfg.max_iterations && *cfg.max_iterations == 0)
    invalid("max_iterations must be positive", "/config/max_iterations");

  const auto& transitions = net.transitions();
  {
    std::vector<bool> hit(transitions.size(), false);
    if (order.size() != transitions.size()) invalid("evaluation order is not a permutation", "/order");
    for (std::size_t i : order) {
      if (i >= hit.size() || hit[i]) invalid("evaluation order is not a permutation", "/order");
      hit[i] = true;
    }
  }

  std::vector<double> y(net.places().size(), 0.0);
  for (const auto& [place, degree] : initial.degrees()) {
    auto idx = net.place_index(place);
    if (!idx) invalid("marking references unknown place '" + place + "'", "/degrees/" + place);
    y[*idx] = degree;
  }

  const std::size_t cap =
      cfg.max_iterations.value_or(std::max<std::size_t>(1, 10 * transitions.size()));

  RunResult result;
  for (std::size_t iteration = 1; iteration <= cap; ++iteration) {
    bool changed = false;
    for (std::size_t ti : order) {
      const auto& in = net.input_indices(ti);
      bool ok = true;
      double lowest = 1.0;
      for (std::size_t p : in) {
        if (y[p] < cfg.lambda) {
          ok = false;
          break;
        }
        lowest = std::min(lowest, y[p]);
      }
      if (!ok) continue;

      const double produced = lowest * transitions[ti].mu;
      bool raised = false;
      for (std::size_t p : net.output_indices(ti)) {
        if (produced > y[p]) {
          if (produced - y[p] > cfg.tolerance) changed = true;
          y[p] = produced;
          raised = true;
        }
      }
      if (raised) {
        Firing f{iteration, transitions[ti].id, {}, produced};
        f.inputs.reserve(in.size());
        for (std::size_t p : in) f.inputs.push_back(y[p]);
        result.trace.push_back(std::move(f));
      }
    }
    result.iterations = iteration;
    if (!changed) {
      for (std::size_t p = 0; p < y.size(); ++p) {
        if (y[p] > 0.0 || initial.degrees().contains(net.places()[p].id))
          result.marking.set(net.places()[p].id, y[p]);
      }
      return result;
    }
  }
  throw Error(ErrorCode::kBudgetExceeded,
              "reasoning did not converge within " + std::to_string(cap) + " iterations");
}

double query(const FuzzyPetriNet& net, const Marking& m, std::string_view proposition_id) {
  const Place* p = net.place_for_proposition(proposition_id);
  if (p == nullptr)
    throw Error(ErrorCode::kNotFound, "unknown proposition '" + std::string(proposition_id) + "'");
  return m.degree(p->id);
}

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string export_dot(const FuzzyPetriNet& net) {
  std::ostringstream out;
  out << "digraph fpn {\n";
  out << "  rankdir=LR;\n";
  for (const auto& p : net.places()) {
    std::string label = p.proposition;
    for (const auto& d : net.propositions())
      if (d.id == p.proposition) label = d.label;
    out << "  " << dot_quote("p:" + p.id) << " [shape=circle, label=" << dot_quote(label) << "];\n";
  }
  for (const auto& t : net.transitions()) {
    out << "  " << dot_quote("t:" + t.id) << " [shape=box, height=0.1, style=filled, fillcolor=black, "
        << "fontcolor=white, label=" << dot_quote(t.id + "\nmu=" + format_number(t.mu)) << "];\n";
  }
  for (const auto& t : net.transitions()) {
    for (const auto& p : t.inputs)
      out << "  " << dot_quote("p:" + p) << " -> " << dot_quote("t:" + t.id) << ";\n";
    for (const auto& p : t.outputs)
      out << "  " << dot_quote("t:" + t.id) << " -> " << dot_quote("p:" + p) << ";\n";
  }
  out << "}\n";
  return out.str();
}

namespace {

Json marking_json(const Marking& m) {
  Json degrees = Json::object();
  for (const auto& [id, y] : m.degrees()) degrees[id] = y;
  return Json{{"degrees", degrees}};
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) invalid("expected an object", path);
  auto it = obj.find(key);
  if (it == obj.end()) invalid(std::string("missing field '") + key + "'", path);
  return *it;
}

std::string require_string(const Json& obj, const char* key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_string()) invalid(std::string("field '") + key + "' must be a string", path + "/" + key);
  return v.get<std::string>();
}

std::vector<std::string> require_strings(const Json& obj, const char* key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_array()) invalid(std::string("field '") + key + "' must be an array", path + "/" + key);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) invalid("expected a string", path + "/" + key + "/" + std::to_string(i));
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kValidation, std::string("malformed JSON: ") + e.what(), "/");
  }
}

Marking marking_from(const Json& doc, const std::string& path, const FuzzyPetriNet* net) {
  const Json& degrees = require(doc, "degrees", path);
  if (!degrees.is_object()) invalid("'degrees' must be an object", path + "/degrees");
  Marking m;
  for (auto it = degrees.begin(); it != degrees.end(); ++it) {
    const std::string where = path + "/degrees/" + it.key();
    if (!it.value().is_number()) invalid("degree must be a number", where);
    const double y = it.value().get<double>();
    if (!is_degree(y)) invalid("degree " + format_number(y) + " outside [0,1]", where);
    if (net != nullptr && !net->place_index(it.key()))
      invalid("marking references unknown place '" + it.key() + "'", where);
    m.set(it.key(), y);
  }
  return m;
}

}  // namespace

std::string net_to_json(const FuzzyPetriNet& net, const Marking* marking) {
  Json doc;
  doc["propositions"] = Json::array();
  for (const auto& d : net.propositions()) doc["propositions"].push_back({{"id", d.id}, {"label", d.label}});
  doc["places"] = Json::array();
  for (const auto& p : net.places()) doc["places"].push_back({{"id", p.id}, {"proposition", p.proposition}});
  doc["transitions"] = Json::array();
  for (const auto& t : net.transitions()) {
    doc["transitions"].push_back(
        {{"id", t.id}, {"mu", t.mu}, {"inputs", t.inputs}, {"outputs", t.outputs}});
  }
  if (marking != nullptr) doc["marking"] = marking_json(*marking);
  return doc.dump(2);
}

NetDocument parse_net_document(std::string_view text) {
  const Json doc = parse_json(text);
  if (!doc.is_object()) invalid("net document must be an object", "/");

  auto array_at = [&](const char* key) -> const Json& {
    const Json& v = require(doc, key, "");
    if (!v.is_array()) invalid(std::string("'") + key + "' must be an array", std::string("/") + key);
    return v;
  };

  std::vector<Proposition> propositions;
  const Json& ds = array_at("propositions");
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const std::string path = path_of("propositions", i);
    Proposition d{require_string(ds[i], "id", path), {}};
    d.label = ds[i].contains("label") ? require_string(ds[i], "label", path) : d.id;
    propositions.push_back(std::move(d));
  }

  std::vector<Place> places;
  const Json& ps = array_at("places");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string path = path_of("places", i);
    places.push_back({require_string(ps[i], "id", path), require_string(ps[i], "proposition", path)});
  }

  std::vector<Transition> transitions;
  const Json& ts = array_at("transitions");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string path = path_of("transitions", i);
    const Json& mu = require(ts[i], "mu", path);
    if (!mu.is_number()) invalid("'mu' must be a number", path + "/mu");
    transitions.push_back({require_string(ts[i], "id", path), mu.get<double>(),
                           require_strings(ts[i], "inputs", path), require_strings(ts[i], "outputs", path)});
  }

  NetDocument out{FuzzyPetriNet(std::move(propositions), std::move(places), std::move(transitions)), {}};
  if (auto it = doc.find("marking"); it != doc.end()) out.marking = marking_from(*it, "/marking", &out.net);
  return out;
}

FuzzyPetriNet net_from_json(std::string_view text) { return parse_net_document(text).net; }

std::string marking_to_json(const Marking& m) { return marking_json(m).dump(2); }

Marking marking_from_json(std::string_view text, const FuzzyPetriNet* net) {
  return marking_from(parse_json(text), "", net);
}

}  // namespace concierge::fpn
