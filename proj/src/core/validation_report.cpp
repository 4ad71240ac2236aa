#include "wotforge/core/validation_report.hpp"

#include <algorithm>

namespace wotforge {

bool ValidationReport::valid() const {
  return std::none_of(issues_.begin(), issues_.end(),
                      [](const Issue& i) { return i.severity == Severity::Error; });
}

void ValidationReport::add(std::string path, std::string code, std::string message,
                           Severity severity) {
  issues_.push_back(Issue{std::move(path), std::move(code), std::move(message), severity});
}

void ValidationReport::append(const ValidationReport& other) {
  issues_.insert(issues_.end(), other.issues_.begin(), other.issues_.end());
}

Json issue_to_json(const Issue& issue) {
  return Json{{"path", issue.path},
              {"code", issue.code},
              {"message", issue.message},
              {"severity", issue.severity == Severity::Error ? "error" : "warning"}};
}

Json ValidationReport::to_json() const {
  Json list = Json::array();
  for (const auto& issue : issues_) list.push_back(issue_to_json(issue));
  return Json{{"valid", valid()}, {"issues", std::move(list)}};
}

} // namespace wotforge
