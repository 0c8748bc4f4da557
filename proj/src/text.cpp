#include "concierge/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace concierge {

std::string normalize_term(std::string_view term) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!term.empty() && is_space(term.front())) term.remove_prefix(1);
  while (!term.empty() && is_space(term.back())) term.remove_suffix(1);
  std::string out(term);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string format_number(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

}  // namespace concierge
