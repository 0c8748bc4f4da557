#pragma once

// Random small nets and a brute-force fixpoint used as the reference for the
// reasoner. The oracle works on the raw arrays, not on FuzzyPetriNet, and
// uses synchronous (Jacobi) updates where the engine sweeps in place.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "concierge/fpn.hpp"

namespace oracle {

struct RawTransition {
  double mu = 1.0;
  std::vector<int> inputs;
  std::vector<int> outputs;
};

struct RawNet {
  int places = 0;
  std::vector<RawTransition> transitions;
  std::vector<double> initial;
};

inline RawNet random_net(std::mt19937_64& rng, int max_places = 8, int max_transitions = 6) {
  std::uniform_int_distribution<int> place_count(2, max_places);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RawNet net;
  net.places = place_count(rng);
  std::uniform_int_distribution<int> transition_count(1, max_transitions);
  std::uniform_int_distribution<int> pick(0, net.places - 1);
  const int n_transitions = transition_count(rng);
  for (int t = 0; t < n_transitions; ++t) {
    RawTransition tr;
    tr.mu = unit(rng);
    const int n_in = std::uniform_int_distribution<int>(1, 3)(rng);
    const int n_out = std::uniform_int_distribution<int>(1, 2)(rng);
    for (int i = 0; i < n_in; ++i) tr.inputs.push_back(pick(rng));
    for (int i = 0; i < n_out; ++i) tr.outputs.push_back(pick(rng));
    net.transitions.push_back(tr);
  }
  net.initial.resize(static_cast<std::size_t>(net.places));
  for (auto& y : net.initial) y = unit(rng) < 0.3 ? 0.0 : unit(rng);
  return net;
}

inline std::string place_name(int p) { return "p" + std::to_string(p); }

inline concierge::fpn::FuzzyPetriNet to_net(const RawNet& raw) {
  using namespace concierge::fpn;
  std::vector<Proposition> ds;
  std::vector<Place> ps;
  for (int p = 0; p < raw.places; ++p) {
    ds.push_back({"d" + std::to_string(p), "d" + std::to_string(p)});
    ps.push_back({place_name(p), "d" + std::to_string(p)});
  }
  std::vector<Transition> ts;
  for (std::size_t t = 0; t < raw.transitions.size(); ++t) {
    Transition tr{"t" + std::to_string(t), raw.transitions[t].mu, {}, {}};
    for (int p : raw.transitions[t].inputs) tr.inputs.push_back(place_name(p));
    for (int p : raw.transitions[t].outputs) tr.outputs.push_back(place_name(p));
    ts.push_back(tr);
  }
  return FuzzyPetriNet(ds, ps, ts);
}

inline concierge::fpn::Marking to_marking(const RawNet& raw) {
  concierge::fpn::Marking m;
  for (int p = 0; p < raw.places; ++p) m.set(place_name(p), raw.initial[static_cast<std::size_t>(p)]);
  return m;
}

/// Loop over all transitions against a frozen snapshot until nothing changes.
inline std::vector<double> fixpoint(const RawNet& raw, double lambda) {
  std::vector<double> y = raw.initial;
  for (int round = 0; round < 10000; ++round) {
    std::vector<double> next = y;
    for (const auto& t : raw.transitions) {
      bool on = true;
      double lo = 1.0;
      for (int p : t.inputs) {
        on = on && y[static_cast<std::size_t>(p)] >= lambda;
        lo = std::min(lo, y[static_cast<std::size_t>(p)]);
      }
      if (!on) continue;
      for (int p : t.outputs) next[static_cast<std::size_t>(p)] = std::max(next[static_cast<std::size_t>(p)], lo * t.mu);
    }
    if (next == y) return y;
    y = std::move(next);
  }
  return y;
}

inline std::vector<double> degrees_of(const RawNet& raw, const concierge::fpn::Marking& m) {
  std::vector<double> out;
  for (int p = 0; p < raw.places; ++p) out.push_back(m.degree(place_name(p)));
  return out;
}

}  // namespace oracle
