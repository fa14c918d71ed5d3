#ifndef RELREWARD_DSL_DIAGNOSTIC_HPP_
#define RELREWARD_DSL_DIAGNOSTIC_HPP_

#include <string>
#include <vector>

#include "json.hpp"

namespace relreward::dsl {

// 1-based line/column; end_col is exclusive and on the same line.
struct Span {
  int line = 0;
  int col = 0;
  int end_col = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

enum class Severity { kError, kWarning };

struct Diagnostic {
  Severity severity = Severity::kError;
  Span span;
  std::string code;
  std::string message;
};

namespace code {
inline constexpr const char* kSyntax = "E001";
inline constexpr const char* kUnknownFunction = "E002";
inline constexpr const char* kUnboundName = "E003";
inline constexpr const char* kTypeMismatch = "E004";
inline constexpr const char* kRecursiveHelper = "E005";
inline constexpr const char* kArity = "E006";
inline constexpr const char* kRewardNotFloat = "E007";
inline constexpr const char* kDuplicate = "E008";
inline constexpr const char* kBadLambda = "E009";
inline constexpr const char* kFloatEquality = "W001";
inline constexpr const char* kUnwrapNone = "R001";
inline constexpr const char* kDivisionByZero = "R002";
inline constexpr const char* kMissingField = "R003";
inline constexpr const char* kNonFinite = "R004";
inline constexpr const char* kIntOverflow = "R005";
inline constexpr const char* kNotChecked = "R006";
}  // namespace code

inline Diagnostic make_error(Span span, const char* code, std::string message) {
  return {Severity::kError, span, code, std::move(message)};
}

inline Diagnostic make_warning(Span span, const char* code,
                               std::string message) {
  return {Severity::kWarning, span, code, std::move(message)};
}

inline bool has_errors(const std::vector<Diagnostic>& ds) {
  for (const auto& d : ds) {
    if (d.severity == Severity::kError) return true;
  }
  return false;
}

inline const char* severity_name(Severity s) {
  return s == Severity::kError ? "error" : "warning";
}

// `severity file:line:col code message`
inline std::string format_diagnostic(const Diagnostic& d,
                                     const std::string& file) {
  return std::string(severity_name(d.severity)) + " " + file + ":" +
         std::to_string(d.span.line) + ":" + std::to_string(d.span.col) + " " +
         d.code + " " + d.message;
}

inline nlohmann::ordered_json to_json(const Diagnostic& d,
                                      const std::string& file) {
  nlohmann::ordered_json j;
  j["severity"] = severity_name(d.severity);
  j["file"] = file;
  j["line"] = d.span.line;
  j["col"] = d.span.col;
  j["end_col"] = d.span.end_col;
  j["code"] = d.code;
  j["message"] = d.message;
  return j;
}

inline nlohmann::ordered_json to_json(const std::vector<Diagnostic>& ds,
                                      const std::string& file) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& d : ds) arr.push_back(to_json(d, file));
  return arr;
}

}  // namespace relreward::dsl

#endif  // RELREWARD_DSL_DIAGNOSTIC_HPP_
