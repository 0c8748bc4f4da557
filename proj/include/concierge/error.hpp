#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace concierge {

enum class ErrorCode {
  kValidation,
  kUnsupportedRuleType,
  kBudgetExceeded,
  kNotFound,
  kEmptyUtterance,
  kIntegrity,
  kNoCandidates,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Base error for the library. `detail` carries a location such as a JSON
/// pointer or a file path when one is known.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = {})
      : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace concierge
