#pragma once

// Fuzzy Petri Net: places carry truth degrees, transitions carry certainty
// factors. Firing propagates min(inputs) * mu into outputs with max-merge.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace concierge::fpn {

struct Proposition {
  std::string id;
  std::string label;

  bool operator==(const Proposition&) const = default;
};

struct Place {
  std::string id;
  std::string proposition;

  bool operator==(const Place&) const = default;
};

struct Transition {
  std::string id;
  double mu = 1.0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  bool operator==(const Transition&) const = default;
};

/// Immutable after construction. The constructor checks referential
/// integrity, id uniqueness, the place/proposition bijection and mu ranges,
/// throwing `Error(kValidation)` with a JSON-pointer style path.
class FuzzyPetriNet {
 public:
  FuzzyPetriNet() = default;
  FuzzyPetriNet(std::vector<Proposition> propositions, std::vector<Place> places,
                std::vector<Transition> transitions);

  const std::vector<Proposition>& propositions() const { return propositions_; }
  const std::vector<Place>& places() const { return places_; }
  const std::vector<Transition>& transitions() const { return transitions_; }

  std::optional<std::size_t> place_index(std::string_view place_id) const;
  const Place* place_for_proposition(std::string_view proposition_id) const;
  const Transition* find_transition(std::string_view transition_id) const;

  // Index form of the arcs, aligned with transitions().
  const std::vector<std::size_t>& input_indices(std::size_t transition) const {
    return input_idx_[transition];
  }
  const std::vector<std::size_t>& output_indices(std::size_t transition) const {
    return output_idx_[transition];
  }

  bool operator==(const FuzzyPetriNet& other) const {
    return propositions_ == other.propositions_ && places_ == other.places_ &&
           transitions_ == other.transitions_;
  }

 private:
  std::vector<Proposition> propositions_;
  std::vector<Place> places_;
  std::vector<Transition> transitions_;
  std::unordered_map<std::string, std::size_t> place_by_id_;
  std::unordered_map<std::string, std::size_t> place_by_proposition_;
  std::unordered_map<std::string, std::size_t> transition_by_id_;
  std::vector<std::vector<std::size_t>> input_idx_;
  std::vector<std::vector<std::size_t>> output_idx_;
};

/// Truth degree per place id. Places not stored have degree 0.
class Marking {
 public:
  using Degrees = std::map<std::string, double, std::less<>>;

  Marking() = default;
  explicit Marking(Degrees degrees);

  double degree(std::string_view place_id) const;
  void set(const std::string& place_id, double degree);
  const Degrees& degrees() const { return degrees_; }

  bool operator==(const Marking&) const = default;

 private:
  Degrees degrees_;
};

enum class RuleType { kType1, kType2, kType3, kType4 };

/// A fuzzy production rule prior to compilation.
///   Type1: IF a1 and ... and an THEN c            (one cf)
///   Type2: IF a THEN c1 and ... and cn            (one cf)
///   Type3: IF a1 or ... or an THEN c              (one cf per antecedent)
/// Type4 is representable so that callers get a typed rejection.
struct RuleSpec {
  std::string id;
  RuleType type = RuleType::kType1;
  std::vector<std::string> antecedents;
  std::vector<std::string> consequents;
  std::vector<double> cf;
};

struct ReasoningConfig {
  double lambda = 0.1;
  // Unset means 10 * |T| (at least 1).
  std::optional<std::size_t> max_iterations;
  double tolerance = 1e-9;
};

struct Firing {
  std::size_t iteration = 0;
  std::string transition;
  std::vector<double> inputs;
  double produced = 0.0;
};

using FiringTrace = std::vector<Firing>;

struct RunResult {
  Marking marking;
  FiringTrace trace;
  std::size_t iterations = 0;
};

std::string place_id_for(std::string_view proposition_id);

/// Each distinct proposition yields one place named `place_id_for(id)`.
/// Type1/Type2 rules become one transition named after the rule id; a Type3
/// rule becomes one transition per antecedent named `<id>.<k>` (k from 1).
FuzzyPetriNet compile_rules(std::span<const RuleSpec> rules,
                            const std::map<std::string, std::string>& labels = {});

bool enabled(const Transition& t, const Marking& m, double lambda);

/// min(input degrees) * mu.
double produced_degree(const Transition& t, const Marking& m);

/// Degrees persist on the inputs; each output becomes max(existing, produced).
Marking fire(const Transition& t, const Marking& m);

/// Sweeps transitions (in `order`, default index order), firing every enabled
/// one in place, until no degree rises by more than cfg.tolerance. The trace
/// records only firings that raised some degree.
RunResult run(const FuzzyPetriNet& net, const Marking& initial, const ReasoningConfig& cfg = {});
RunResult run(const FuzzyPetriNet& net, const Marking& initial, const ReasoningConfig& cfg,
              std::span<const std::size_t> order);

double query(const FuzzyPetriNet& net, const Marking& m, std::string_view proposition_id);

std::string export_dot(const FuzzyPetriNet& net);

struct NetDocument {
  FuzzyPetriNet net;
  std::optional<Marking> marking;
};

std::string net_to_json(const FuzzyPetriNet& net, const Marking* marking = nullptr);
NetDocument parse_net_document(std::string_view text);
FuzzyPetriNet net_from_json(std::string_view text);

std::string marking_to_json(const Marking& m);
/// When `net` is given, every key must name one of its places.
Marking marking_from_json(std::string_view text, const FuzzyPetriNet* net = nullptr);

}  // namespace concierge::fpn
