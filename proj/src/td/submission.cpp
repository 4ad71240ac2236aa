#include "wotforge/td/submission.hpp"

#include "wotforge/td/validation.hpp"

namespace wotforge::td {

namespace {

void prefix_paths(ValidationReport& report, const std::string& prefix) {
  for (auto& issue : report.issues()) issue.path = prefix + issue.path;
}

} // namespace

std::variant<ProjectRecord, ValidationReport> ingest_submission(const Json& doc) {
  auto report = validate_project_submission(doc);
  if (!report.valid()) return report;

  auto td_report = validate_td_structure(doc.at("td"), {.allow_placeholders = true});
  if (!td_report.valid()) {
    prefix_paths(td_report, "/td");
    return td_report;
  }

  auto record = canonicalize(decode_project(doc));
  auto canonical_report = validate_project_submission(encode_submission(record));
  if (!canonical_report.valid()) {
    for (auto& issue : canonical_report.issues()) {
      issue.message += " (after trimming whitespace)";
    }
    return canonical_report;
  }
  return record;
}

} // namespace wotforge::td
