#pragma once

#include "wotforge/core/json.hpp"
#include "wotforge/core/validation_report.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace wotforge::td {

using Bindings = std::map<std::string, std::string, std::less<>>;

class TemplateError : public std::runtime_error {
public:
  TemplateError(const std::string& message, ValidationReport report = {},
                std::vector<std::string> missing = {})
      : std::runtime_error(message), report_(std::move(report)), missing_(std::move(missing)) {}

  const ValidationReport& report() const { return report_; }
  /// Placeholder names without a binding, when that is the failure.
  const std::vector<std::string>& missing() const { return missing_; }

private:
  ValidationReport report_;
  std::vector<std::string> missing_;
};

struct PlaceholderScan {
  std::set<std::string> names;
  /// One "placeholder" issue per string value holding well-formed tokens.
  std::vector<Issue> occurrences;
  /// One "malformedPlaceholder" issue per offending string value.
  std::vector<Issue> malformed;
};

/// Scans string values only; object keys and non-strings are ignored.
PlaceholderScan scan_placeholders(const Json& document);

/// A TD document that may carry {{NAME}} placeholders, NAME in [A-Z0-9_]+.
class TdTemplate {
public:
  /// Throws TemplateError if document is not an object or holds a
  /// malformed placeholder.
  explicit TdTemplate(Json document);

  const Json& document() const { return document_; }
  const std::set<std::string>& placeholders() const { return placeholders_; }

private:
  Json document_;
  std::set<std::string> placeholders_;
};

/// Throws TemplateError naming the path of the first malformed placeholder.
std::set<std::string> extract_placeholders(const Json& document);
inline const std::set<std::string>& extract_placeholders(const TdTemplate& t) {
  return t.placeholders();
}

/// Replaces every {{NAME}} with bindings[NAME]. Extra bindings are ignored.
/// Throws TemplateError on missing bindings ("missing binding: A, B") or
/// when the result fails validate_td_structure.
Json instantiate_template(const TdTemplate& tmpl, const Bindings& bindings);

} // namespace wotforge::td
