#pragma once

#include "wotforge/core/json.hpp"

#include <map>
#include <string>
#include <vector>

namespace wotforge::fetch {

/// URL templates for one code forge. Variables: {origin}, {owner},
/// {repo}, {branch}, {file}. An empty template disables that lookup.
struct ForgeRule {
  std::string readme;
  std::string archive;
};

/// Data-driven mapping from repository host to raw-content and archive
/// URLs. Host "*" applies to hosts without an entry.
struct ForgeTable {
  std::vector<std::string> branches{"main", "master"};
  std::vector<std::string> readme_files{"README.md", "readme.md"};
  std::map<std::string, ForgeRule> forges;

  static ForgeTable defaults();
  /// {"branches": [...], "readmeFiles": [...], "forges": {host: {readme, archive}}};
  /// absent members keep their defaults. Throws std::invalid_argument.
  static ForgeTable from_json(const Json& doc);
  Json to_json() const;

  /// Branch-major: main/README.md, main/readme.md, master/README.md, ...
  std::vector<std::string> readme_candidates(const std::string& repository) const;
  std::vector<std::string> archive_candidates(const std::string& repository) const;
};

} // namespace wotforge::fetch
