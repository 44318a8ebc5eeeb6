#include "advplan/error.hpp"

namespace advplan {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kUsage: return "usage";
    case ErrorCategory::kIo: return "io";
    case ErrorCategory::kParse: return "parse";
    case ErrorCategory::kUnsupported: return "unsupported";
    case ErrorCategory::kInvalidInput: return "invalid-input";
    case ErrorCategory::kPrecondition: return "precondition";
    case ErrorCategory::kPlanInvalid: return "plan-invalid";
    case ErrorCategory::kBudgetExhausted: return "budget-exhausted";
    case ErrorCategory::kBoundExceeded: return "bound-exceeded";
    case ErrorCategory::kIllegalPlacement: return "illegal-placement";
    case ErrorCategory::kGaveUp: return "gave-up";
    case ErrorCategory::kUnsolvable: return "unsolvable";
  }
  return "unknown";
}

ParseError::ParseError(const std::string& message, int line, int column)
    : Error(ErrorCategory::kParse, std::to_string(line) + ":" +
                                       std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

}  // namespace advplan
