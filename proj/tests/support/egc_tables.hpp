#pragma once

// Reference tables transcribed by hand for the tests: the octant table of
// pleasure/displeasure and the six emotion groups.

#include <array>
#include <map>
#include <set>
#include <string>

namespace tables {

struct Octant {
  const char* area;
  int s1, s2, s3;
  bool pleasure;
};

inline constexpr std::array<Octant, 8> kOctants{{
    {"I", +1, +1, +1, true},
    {"II", -1, +1, +1, false},
    {"III", -1, -1, +1, true},
    {"IV", +1, -1, +1, false},
    {"V", +1, +1, -1, false},
    {"VI", -1, +1, -1, true},
    {"VII", -1, -1, -1, false},
    {"VIII", +1, -1, -1, true},
}};

inline const std::map<std::string, std::set<std::string>>& groups() {
  static const std::map<std::string, std::set<std::string>> g{
      {"Well-Being", {"joy", "distress"}},
      {"Fortunes-of-Others", {"happy-for", "gloating", "resentment", "sorry-for"}},
      {"Prospect-based", {"hope", "fear"}},
      {"Confirmation", {"satisfaction", "relief", "fears-confirmed", "disappointment"}},
      {"Attribution", {"pride", "admiration", "shame", "disliking"}},
      {"Well-Being/Attribution", {"gratitude", "anger", "gratification", "remorse"}},
  };
  return g;
}

}  // namespace tables
