#pragma once

#include "wotforge/core/json.hpp"

#include <string>
#include <vector>

namespace wotforge {

enum class Severity { Error, Warning };

struct Issue {
  std::string path; // JSON pointer into the validated document
  std::string code;
  std::string message;
  Severity severity = Severity::Error;

  bool operator==(const Issue&) const = default;
};

class ValidationReport {
public:
  bool valid() const;

  void add(std::string path, std::string code, std::string message,
           Severity severity = Severity::Error);
  void append(const ValidationReport& other);

  const std::vector<Issue>& issues() const { return issues_; }
  std::vector<Issue>& issues() { return issues_; }

  Json to_json() const;

private:
  std::vector<Issue> issues_;
};

Json issue_to_json(const Issue& issue);

} // namespace wotforge
