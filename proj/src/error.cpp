#include "concierge/error.hpp"

namespace concierge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation:
      return "validation_error";
    case ErrorCode::kUnsupportedRuleType:
      return "unsupported_rule_type";
    case ErrorCode::kBudgetExceeded:
      return "reasoning_budget_exceeded";
    case ErrorCode::kNotFound:
      return "not_found";
    case ErrorCode::kEmptyUtterance:
      return "empty_utterance";
    case ErrorCode::kIntegrity:
      return "integrity_error";
    case ErrorCode::kNoCandidates:
      return "no_candidates";
    case ErrorCode::kIo:
      return "io_error";
  }
  return "unknown";
}

}  // namespace concierge
