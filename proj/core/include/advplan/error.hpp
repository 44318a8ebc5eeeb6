#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace advplan {

// Machine-readable failure classes. The CLI maps each one to a distinct exit
// code, so the numeric values are part of the external interface.
enum class ErrorCategory {
  kUsage = 2,
  kIo = 3,
  kParse = 4,
  kUnsupported = 5,
  kInvalidInput = 6,
  kPrecondition = 7,
  kPlanInvalid = 8,
  kBudgetExhausted = 9,
  kBoundExceeded = 10,
  kIllegalPlacement = 11,
  kGaveUp = 12,
  kUnsolvable = 13,
};

std::string_view category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }
  // The message without its "line:column: " prefix.
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

class UnsupportedFeature : public Error {
 public:
  explicit UnsupportedFeature(const std::string& feature)
      : Error(ErrorCategory::kUnsupported,
              "unsupported PDDL feature: " + feature),
        feature_(feature) {}

  const std::string& feature() const { return feature_; }

 private:
  std::string feature_;
};

}  // namespace advplan
