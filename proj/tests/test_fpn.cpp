#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <regex>

#include "concierge/error.hpp"
#include "concierge/fpn.hpp"
#include "support/fpn_oracle.hpp"

using namespace concierge;
using namespace concierge::fpn;

namespace {

FuzzyPetriNet chain_net() {
  std::vector<RuleSpec> rules{
      {"r1", RuleType::kType1, {"d1"}, {"d2"}, {0.9}},
      {"r2", RuleType::kType1, {"d2"}, {"d3"}, {0.9}},
  };
  return compile_rules(rules);
}

Marking with(std::initializer_list<std::pair<const char*, double>> degrees) {
  Marking m;
  for (auto [p, y] : degrees) m.set(p, y);
  return m;
}

std::size_t count(const std::string& text, const std::string& pattern) {
  std::regex re(pattern);
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re),
                                                std::sregex_iterator()));
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kIo;
}

}  // namespace

TEST_CASE("compile_rules: Type 3 becomes parallel transitions into one place") {
  std::vector<RuleSpec> rules{{"r", RuleType::kType3, {"d1", "d2"}, {"d3"}, {0.5, 0.8}}};
  const auto net = compile_rules(rules);
  CHECK(net.places().size() == 3);
  REQUIRE(net.transitions().size() == 2);
  for (const auto& t : net.transitions()) {
    CHECK(t.outputs == std::vector<std::string>{"p_d3"});
    CHECK(t.inputs.size() == 1);
  }
  CHECK(net.transitions()[0].mu == 0.5);
  CHECK(net.transitions()[1].mu == 0.8);
}

TEST_CASE("compile_rules: Type 1 with one antecedent and Type 2 fan-out") {
  std::vector<RuleSpec> one{{"r", RuleType::kType1, {"d1"}, {"d2"}, {0.9}}};
  const auto simple = compile_rules(one);
  CHECK(simple.places().size() == 2);
  REQUIRE(simple.transitions().size() == 1);
  CHECK(simple.transitions()[0].inputs.size() == 1);
  CHECK(simple.transitions()[0].outputs.size() == 1);

  std::vector<RuleSpec> two{{"r", RuleType::kType2, {"d1"}, {"d2", "d3", "d4"}, {0.7}}};
  const auto fan = compile_rules(two);
  REQUIRE(fan.transitions().size() == 1);
  CHECK(fan.transitions()[0].outputs.size() == 3);
  CHECK(fan.places().size() == 4);
}

TEST_CASE("compile_rules: shared propositions share one place") {
  std::vector<RuleSpec> rules{
      {"a", RuleType::kType1, {"x", "y"}, {"z"}, {0.9}},
      {"b", RuleType::kType1, {"x"}, {"w"}, {0.9}},
  };
  const auto net = compile_rules(rules);
  CHECK(net.places().size() == 4);
  CHECK(net.propositions().size() == 4);
}

TEST_CASE("compile_rules: rejections") {
  std::vector<RuleSpec> type4{{"r", RuleType::kType4, {"d1"}, {"d2", "d3"}, {0.5, 0.5}}};
  CHECK(code_of([&] { compile_rules(type4); }) == ErrorCode::kUnsupportedRuleType);

  std::vector<RuleSpec> bad_cf{{"r", RuleType::kType1, {"d1"}, {"d2"}, {1.2}}};
  CHECK(code_of([&] { compile_rules(bad_cf); }) == ErrorCode::kValidation);

  std::vector<RuleSpec> no_ante{{"r", RuleType::kType1, {}, {"d2"}, {0.5}}};
  CHECK(code_of([&] { compile_rules(no_ante); }) == ErrorCode::kValidation);

  std::vector<RuleSpec> no_cons{{"r", RuleType::kType2, {"d1"}, {}, {0.5}}};
  CHECK(code_of([&] { compile_rules(no_cons); }) == ErrorCode::kValidation);

  std::vector<RuleSpec> type3_cf{{"r", RuleType::kType3, {"a", "b"}, {"c"}, {0.5}}};
  CHECK(code_of([&] { compile_rules(type3_cf); }) == ErrorCode::kValidation);

  std::vector<RuleSpec> type3_single{{"r", RuleType::kType3, {"a"}, {"c"}, {0.5}}};
  CHECK(code_of([&] { compile_rules(type3_single); }) == ErrorCode::kValidation);
}

TEST_CASE("net construction rejects broken structure") {
  CHECK(code_of([] { FuzzyPetriNet({{"d", "d"}}, {{"p", "d"}}, {{"t", 0.5, {"p"}, {"q"}}}); }) ==
        ErrorCode::kValidation);
  CHECK(code_of([] { FuzzyPetriNet({{"d", "d"}, {"e", "e"}}, {{"p", "d"}}, {}); }) ==
        ErrorCode::kValidation);
  CHECK(code_of([] { FuzzyPetriNet({{"d", "d"}}, {{"p", "d"}, {"q", "d"}}, {}); }) ==
        ErrorCode::kValidation);
  CHECK(code_of([] { FuzzyPetriNet({{"d", "d"}}, {{"p", "d"}}, {{"t", -0.1, {"p"}, {"p"}}}); }) ==
        ErrorCode::kValidation);
  CHECK(code_of([] { FuzzyPetriNet({{"d", "d"}}, {{"p", "d"}}, {{"t", 0.5, {}, {"p"}}}); }) ==
        ErrorCode::kValidation);
}

TEST_CASE("enabled uses a non-strict threshold") {
  Transition t{"t", 0.9, {"a", "b"}, {"c"}};
  CHECK(enabled(t, with({{"a", 0.8}, {"b", 0.6}}), 0.5));
  Transition single{"t", 0.9, {"a"}, {"c"}};
  CHECK_FALSE(enabled(single, with({{"a", 0.4}}), 0.5));
  CHECK(enabled(single, with({{"a", 0.0}}), 0.0));
  CHECK(enabled(single, Marking{}, 0.0));
}

TEST_CASE("fire: min times mu, max-merge, inputs persist") {
  Transition t{"t", 0.9, {"a", "b"}, {"c"}};
  auto m = fire(t, with({{"a", 0.8}, {"b", 0.6}}));
  CHECK(m.degree("c") == doctest::Approx(0.54).epsilon(1e-15));
  CHECK(m.degree("a") == 0.8);
  CHECK(m.degree("b") == 0.6);

  Transition single{"t", 0.9, {"a"}, {"c"}};
  CHECK(fire(single, with({{"a", 0.8}})).degree("c") == doctest::Approx(0.72).epsilon(1e-15));

  auto kept = fire(t, with({{"a", 0.8}, {"b", 0.6}, {"c", 0.9}}));
  CHECK(kept.degree("c") == 0.9);
}

TEST_CASE("run: chain, Type 3 max and the zero marking") {
  const auto chain = chain_net();
  auto result = run(chain, with({{"p_d1", 1.0}}));
  CHECK(query(chain, result.marking, "d3") == doctest::Approx(0.81).epsilon(1e-15));
  CHECK(result.trace.size() == 2);
  CHECK(result.trace[0].transition == "r1");

  std::vector<RuleSpec> or_rule{{"r", RuleType::kType3, {"d1", "d2"}, {"d3"}, {0.5, 0.8}}};
  const auto or_net = compile_rules(or_rule);
  auto or_result = run(or_net, with({{"p_d1", 0.6}, {"p_d2", 0.9}}));
  CHECK(query(or_net, or_result.marking, "d3") == doctest::Approx(0.72).epsilon(1e-15));

  auto zero = run(chain, Marking{});
  for (const auto& d : chain.propositions()) CHECK(query(chain, zero.marking, d.id) == 0.0);
  CHECK(zero.trace.empty());
}

TEST_CASE("query: identity and unknown proposition") {
  FuzzyPetriNet net({{"d", "d"}}, {{"p", "d"}}, {});
  auto result = run(net, with({{"p", 0.7}}));
  CHECK(query(net, result.marking, "d") == 0.7);
  CHECK(code_of([&] { query(net, result.marking, "nope"); }) == ErrorCode::kNotFound);
}

TEST_CASE("run: cycles converge and the trace only records changes") {
  FuzzyPetriNet net({{"a", "a"}, {"b", "b"}}, {{"pa", "a"}, {"pb", "b"}},
                    {{"ab", 0.9, {"pa"}, {"pb"}}, {"ba", 0.9, {"pb"}, {"pa"}}});
  auto result = run(net, with({{"pa", 0.5}}));
  CHECK(result.marking.degree("pb") == doctest::Approx(0.45));
  CHECK(result.marking.degree("pa") == 0.5);
  CHECK(result.trace.size() == 1);
}

TEST_CASE("run: explicit budget exhaustion is reported") {
  const auto chain = chain_net();
  ReasoningConfig cfg;
  cfg.max_iterations = 1;
  std::vector<std::size_t> reversed{1, 0};
  CHECK(code_of([&] { run(chain, with({{"p_d1", 1.0}}), cfg, reversed); }) == ErrorCode::kBudgetExceeded);
}

TEST_CASE("run: rejects markings and configs outside the net") {
  const auto chain = chain_net();
  CHECK(code_of([&] { run(chain, with({{"elsewhere", 0.5}})); }) == ErrorCode::kValidation);
  ReasoningConfig cfg;
  cfg.lambda = 1.5;
  CHECK(code_of([&] { run(chain, Marking{}, cfg); }) == ErrorCode::kValidation);
  CHECK(code_of([] { Marking m; m.set("p", 1.01); }) == ErrorCode::kValidation);
}

TEST_CASE("oracle equivalence on random nets") {
  std::mt19937_64 rng(20130712);
  for (int i = 0; i < 300; ++i) {
    const auto raw = oracle::random_net(rng);
    const auto net = oracle::to_net(raw);
    for (double lambda : {0.0, 0.1, 0.5}) {
      ReasoningConfig cfg;
      cfg.lambda = lambda;
      const auto engine = oracle::degrees_of(raw, run(net, oracle::to_marking(raw), cfg).marking);
      const auto expected = oracle::fixpoint(raw, lambda);
      for (std::size_t p = 0; p < expected.size(); ++p) REQUIRE(engine[p] == doctest::Approx(expected[p]).epsilon(1e-9));
    }
  }
}

TEST_CASE("properties: range, idempotence, confluence, threshold law") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto raw = oracle::random_net(rng);
    const auto net = oracle::to_net(raw);
    const auto result = run(net, oracle::to_marking(raw));
    for (const auto& [p, y] : result.marking.degrees()) {
      CHECK(y >= 0.0);
      CHECK(y <= 1.0);
    }

    const auto again = run(net, result.marking);
    CHECK(again.marking == result.marking);
    CHECK(again.trace.empty());

    std::vector<std::size_t> order(net.transitions().size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (int k = 0; k < 10; ++k) {
      std::shuffle(order.begin(), order.end(), rng);
      const auto shuffled = run(net, oracle::to_marking(raw), {}, order);
      for (int p = 0; p < raw.places; ++p) {
        const auto id = oracle::place_name(p);
        CHECK(std::abs(shuffled.marking.degree(id) - result.marking.degree(id)) <= 1e-12);
      }
    }

    for (std::size_t t = 0; t < net.transitions().size(); ++t) {
      const auto& tr = net.transitions()[t];
      const bool blocked = std::any_of(tr.inputs.begin(), tr.inputs.end(), [&](const std::string& p) {
        return result.marking.degree(p) < ReasoningConfig{}.lambda;
      });
      if (!blocked) continue;
      for (const auto& f : result.trace) CHECK(f.transition != tr.id);
    }
  }
}

TEST_CASE("export_dot: node and edge counts") {
  std::vector<RuleSpec> one{{"r", RuleType::kType1, {"d1"}, {"d2"}, {0.9}}};
  const auto dot = export_dot(compile_rules(one));
  CHECK(dot.rfind("digraph fpn {", 0) == 0);
  CHECK(count(dot, "shape=circle") == 2);
  CHECK(count(dot, "shape=box") == 1);
  CHECK(count(dot, "->") == 2);
  CHECK(dot.find("mu=0.9") != std::string::npos);

  const auto empty = export_dot(FuzzyPetriNet{});
  CHECK(count(empty, "shape=") == 0);
  CHECK(count(empty, "->") == 0);

  std::vector<RuleSpec> or_rule{{"r", RuleType::kType3, {"d1", "d2"}, {"d3"}, {0.5, 0.8}}};
  const auto fig = export_dot(compile_rules(or_rule));
  CHECK(count(fig, "shape=circle") == 3);
  CHECK(count(fig, "shape=box") == 2);
}

TEST_CASE("json: round trip and validation paths") {
  std::vector<RuleSpec> rules{
      {"a", RuleType::kType1, {"x", "y"}, {"z"}, {0.9}},
      {"b", RuleType::kType2, {"z"}, {"u", "v"}, {0.7}},
      {"c", RuleType::kType3, {"u", "x"}, {"w"}, {0.4, 0.6}},
  };
  const auto net = compile_rules(rules);
  CHECK(net_from_json(net_to_json(net)) == net);

  Marking m;
  m.set("p_x", 0.25);
  const auto doc = parse_net_document(net_to_json(net, &m));
  REQUIRE(doc.marking.has_value());
  CHECK(*doc.marking == m);

  const char* dangling = R"({"propositions":[{"id":"d","label":"d"}],
    "places":[{"id":"p","proposition":"d"}],
    "transitions":[{"id":"t","mu":0.5,"inputs":["p"],"outputs":["missing"]}]})";
  try {
    net_from_json(dangling);
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidation);
    CHECK(e.detail() == "/transitions/0/outputs/0");
  }

  const char* bad_degree = R"({"propositions":[{"id":"d"}],"places":[{"id":"p","proposition":"d"}],
    "transitions":[],"marking":{"degrees":{"p":1.5}}})";
  CHECK(code_of([&] { parse_net_document(bad_degree); }) == ErrorCode::kValidation);
  CHECK(code_of([] { net_from_json("{not json"); }) == ErrorCode::kValidation);
  CHECK(code_of([] { marking_from_json(R"({"degrees":{"p":-0.1}})"); }) == ErrorCode::kValidation);
}
