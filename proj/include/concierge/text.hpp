#pragma once

#include <string>
#include <string_view>

namespace concierge {

/// Lowercase and trim ASCII whitespace.
std::string normalize_term(std::string_view term);

/// Shortest round-trip decimal form of `value`.
std::string format_number(double value);

/// Fixed-point rendering with `digits` decimals, for messages.
std::string format_fixed(double value, int digits = 2);

}  // namespace concierge
